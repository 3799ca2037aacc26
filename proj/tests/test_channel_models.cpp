// SPDX-License-Identifier: Apache-2.0
//
// pdpkit - power-delay-profile design and OFDM channel estimation workbench
// Copyright (C) 2026 The pdpkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "catch_amalgamated.hpp"
#include "oracles.hpp"

#include "pdpkit/channel_models.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace pdpkit;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("PowerDelayProfile - validation")
{
    CHECK_NOTHROW(PowerDelayProfile({{0.0, 0.0}}));
    CHECK_THROWS_AS(PowerDelayProfile(std::vector<Tap>{}), std::invalid_argument);
    CHECK_THROWS_AS(PowerDelayProfile({{0.0, 0.0}, {0.0, -1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(PowerDelayProfile({{10.0, 0.0}, {5.0, -1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(PowerDelayProfile({{-1.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(PowerDelayProfile({{0.0, NAN}}), std::invalid_argument);
    CHECK_THROWS_AS(PowerDelayProfile({{INFINITY, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(PowerDelayProfile::from_vectors({0, 10}, {0}), std::invalid_argument);
}

TEST_CASE("Built-in profiles - table entries")
{
    const auto flat = builtin_profile("Flat");
    REQUIRE(flat.size() == 1);
    CHECK(flat.taps()[0].delay_ns == 0.0);
    CHECK(flat.taps()[0].gain_db == 0.0);

    const auto two = builtin_profile("TwoPath");
    REQUIRE(two.size() == 2);
    CHECK(two.taps()[0].delay_ns == 50.0);
    CHECK(two.taps()[0].gain_db == -3.0);
    CHECK(two.taps()[1].delay_ns == 5000.0);
    CHECK(two.taps()[1].gain_db == -3.0);

    const auto d = builtin_profile("Designed");
    REQUIRE(d.size() == 10);
    CHECK(d.max_delay_ns() == 9000.0);
    const std::vector<double> delays = {0, 30, 200, 300, 500, 1500, 2500, 5000, 7000, 9000};
    const std::vector<double> gains = {0, 0, 0, 0, 0, 0, -1, -1, -2, -4};
    for (std::size_t i = 0; i < 10; ++i)
    {
        CHECK(d.taps()[i].delay_ns == delays[i]);
        CHECK(d.taps()[i].gain_db == gains[i]);
    }

    CHECK(builtin_profile("EPA").max_delay_ns() == 410.0);
    CHECK(builtin_profile("EVA").max_delay_ns() == 2510.0);
    CHECK(builtin_profile("ETU").max_delay_ns() == 5000.0);
}

TEST_CASE("Built-in profiles - lookup is case-insensitive, unknown names throw")
{
    CHECK(builtin_profile("epa") == builtin_profile("EPA"));
    CHECK(builtin_profile("designed") == builtin_profile("Designed"));
    try
    {
        builtin_profile("NoSuchChannel");
        FAIL("expected an exception");
    }
    catch (const std::invalid_argument &e)
    {
        // The message lists the valid names.
        CHECK(std::string(e.what()).find("EPA") != std::string::npos);
    }
}

TEST_CASE("Built-in profiles - every catalog entry satisfies the invariants")
{
    for (const auto &name : builtin_profile_names())
    {
        INFO(name);
        const auto p = builtin_profile(name);
        REQUIRE(p.size() >= 1);
        CHECK(p.first_delay_ns() >= 0.0);
        for (std::size_t i = 1; i < p.size(); ++i)
            CHECK(p.taps()[i].delay_ns > p.taps()[i - 1].delay_ns);
        for (const auto &t : p.taps())
        {
            CHECK(std::isfinite(t.delay_ns));
            CHECK(std::isfinite(t.gain_db));
        }
        CHECK_NOTHROW(PowerDelayProfile(p.taps()));
    }
    CHECK(test_channel_names().size() == 8);
}

TEST_CASE("Total power - Designed against the oracle sum")
{
    const double expected = oracle::total_power({0, 0, 0, 0, 0, 0, -1, -1, -2, -4});
    const auto d = builtin_profile("Designed");
    CHECK_THAT(d.total_linear_power(), WithinRel(expected, 1e-14));
    // The commonly quoted rounded value 8.594 is off by about 0.3 %; the exact sum is 8.6177.
    CHECK_THAT(expected, WithinAbs(8.6177, 1e-4));
}

TEST_CASE("normalize_power - examples and idempotence")
{
    const auto one = normalize_power(PowerDelayProfile({{0.0, 0.0}}));
    CHECK_THAT(one.taps()[0].gain_db, WithinAbs(0.0, 1e-12));

    const auto two = normalize_power(PowerDelayProfile({{0.0, 0.0}, {100.0, 0.0}}));
    CHECK_THAT(two.taps()[0].gain_db, WithinAbs(-3.0103, 1e-4));
    CHECK_THAT(two.taps()[1].gain_db, WithinAbs(-3.0103, 1e-4));

    for (const auto &name : builtin_profile_names())
    {
        INFO(name);
        const auto n1 = normalize_power(builtin_profile(name));
        CHECK_THAT(n1.total_linear_power(), WithinAbs(1.0, 1e-12));
        const auto n2 = normalize_power(n1);
        for (std::size_t i = 0; i < n1.size(); ++i)
            CHECK_THAT(n2.taps()[i].gain_db, WithinAbs(n1.taps()[i].gain_db, 1e-12));
        CHECK(n2.taps()[0].delay_ns == n1.taps()[0].delay_ns);
    }
}

TEST_CASE("CDL tables - embedded data")
{
    CHECK(cdl_tables_version() == 1);
    REQUIRE(cdl_profiles().size() == 3);
    CHECK(cdl_profile("CDL-A").normalized_delays.size() == 23);
    CHECK(cdl_profile("CDL-B").normalized_delays.size() == 23);
    CHECK(cdl_profile("CDL-C").normalized_delays.size() == 24);
    CHECK(cdl_profile("cdl-b").name == "CDL-B");
    CHECK_THROWS_AS(cdl_profile("CDL-Z"), std::invalid_argument);
    for (const auto &p : cdl_profiles())
        CHECK(p.normalized_delays.size() == p.cluster_powers_db.size());
}

TEST_CASE("scale_cdl - examples")
{
    const CdlProfile unit{"unit", {0.0, 1.0}, {0.0, -3.0}};
    const auto p = scale_cdl(unit, 30.0);
    CHECK(p.taps()[0].delay_ns == 0.0);
    CHECK(p.taps()[1].delay_ns == 30.0);
    CHECK(p.taps()[1].gain_db == -3.0);
    CHECK(p.name() == "unit:30");

    CHECK_THROWS_AS(scale_cdl(unit, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(scale_cdl(unit, -5.0), std::invalid_argument);
}

TEST_CASE("scale_cdl - CDL-A at 1148 ns, hand-multiplied spot entries")
{
    // CDL-A clusters 2, 4 and 23: (0.3819, 0 dB), (0.5868, -4 dB), (9.6586, -29.7 dB).
    const auto p = scale_cdl(cdl_profile("CDL-A"), 1148.0);
    auto has = [&](double delay, double gain) {
        for (const auto &t : p.taps())
            if (std::abs(t.delay_ns - delay) < 1e-9)
                return t.gain_db == gain;
        return false;
    };
    CHECK(has(438.4212, 0.0));
    CHECK(has(673.6464, -4.0));
    CHECK(has(11088.0728, -29.7));
    CHECK(p.max_delay_ns() == 9.6586 * 1148.0);
}

TEST_CASE("scale_cdl - delays are normalized x DS bit-exactly and sorted")
{
    for (const auto &prof : cdl_profiles())
        for (double ds : {20.0, 30.0, 100.0, 1148.0, 9000.0, 30000.0})
        {
            const auto p = scale_cdl(prof, ds);
            REQUIRE(p.size() == prof.normalized_delays.size());
            // Every output delay is exactly some normalized delay times ds.
            for (const auto &t : p.taps())
            {
                bool found = false;
                for (double nd : prof.normalized_delays)
                    found = found || (t.delay_ns == nd * ds);
                CHECK(found);
            }
        }
}

TEST_CASE("scale_cdl - linearity in the delay spread")
{
    const CdlProfile q{"q", {0.0, 0.5, 1.0, 2.0, 4.0}, {0, -1, -2, -3, -4}};
    for (double a : {1.0, 2.0, 4.0})
        for (double b : {2.0, 8.0, 64.0})
        {
            const auto ab = scale_cdl(q, a * b);
            const auto aa = scale_cdl(q, a);
            for (std::size_t i = 0; i < ab.size(); ++i)
                CHECK(ab.taps()[i].delay_ns == aa.taps()[i].delay_ns * b);
        }
}

TEST_CASE("Profile JSON - round trip and loading from file")
{
    const auto d = builtin_profile("Designed");
    const auto back = profile_from_json_text(profile_to_json_text(d));
    CHECK(back == d);
    CHECK(back.name() == "Designed");

    const auto path = std::filesystem::temp_directory_path() / "pdpkit_test_profile.json";
    {
        std::ofstream f(path);
        f << R"({"name": "mine", "delays_ns": [0, 100, 250], "gains_db": [0, -2.5, -6]})";
    }
    const auto p = load_profile_json(path.string());
    CHECK(p.name() == "mine");
    CHECK(p.size() == 3);
    CHECK(p.taps()[2].gain_db == -6.0);
    CHECK(resolve_channel(path.string()) == p);
    std::filesystem::remove(path);

    CHECK_THROWS(profile_from_json_text(R"({"name": "x", "delays_ns": [0, 1], "gains_db": [0]})"));
    CHECK_THROWS(profile_from_json_text("not json"));
}

TEST_CASE("resolve_channel - selectors")
{
    CHECK(resolve_channel("EPA") == builtin_profile("EPA"));
    const auto c = resolve_channel("CDL-B:100");
    CHECK(c == scale_cdl(cdl_profile("CDL-B"), 100.0));
    CHECK(c.name() == "CDL-B:100");
    CHECK_THROWS_AS(resolve_channel("nothing"), std::invalid_argument);
    CHECK_THROWS_AS(resolve_channel("CDL-B:abc"), std::invalid_argument);
}

TEST_CASE("ChannelSpec - Doppler limit")
{
    const ChannelSpec s{builtin_profile("EPA"), 97.0};
    CHECK_NOTHROW(s.validate(1.0 / 14e3));
    const ChannelSpec bad{builtin_profile("EPA"), 1e6};
    CHECK_THROWS_AS(bad.validate(1.0 / 14e3), std::invalid_argument);
    const ChannelSpec norm{builtin_profile("Designed"), 0.0, true};
    CHECK_THAT(norm.effective_pdp().total_linear_power(), WithinAbs(1.0, 1e-12));
}
