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
#include "montecarlo.hpp"
#include "oracles.hpp"

#include "pdpkit/design_kit.hpp"

#include <json.hpp>

#include <random>

using namespace pdpkit;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
const FrameConfig frame;

std::vector<PowerDelayProfile> catalog()
{
    std::vector<PowerDelayProfile> out;
    for (const auto &n : builtin_profile_names())
        out.push_back(builtin_profile(n));
    return out;
}

PowerDelayProfile random_pdp(std::mt19937_64 &rng)
{
    std::uniform_int_distribution<int> ntaps(1, 8);
    std::uniform_real_distribution<double> gap(1.0, 3000.0), gain(-25.0, 3.0), start(0.0, 200.0);
    std::vector<Tap> t;
    double d = start(rng);
    const int n = ntaps(rng);
    for (int i = 0; i < n; ++i)
    {
        t.push_back({d, gain(rng)});
        d += gap(rng);
    }
    return PowerDelayProfile(t);
}

bool has_kind(const ApplicabilityReport &r, ViolationKind k)
{
    for (const auto &v : r.violations)
        if (v.kind == k)
            return true;
    return false;
}
} // namespace

TEST_CASE("Envelope - interpolation and domain")
{
    const PdpEnvelope d(builtin_profile("Designed"));
    CHECK_THAT(d(2000.0), WithinAbs(-0.5, 1e-12));
    CHECK_THAT(d(7000.0), WithinAbs(-2.0, 1e-12));
    CHECK_THAT(d(8000.0), WithinAbs(-3.0, 1e-12));
    CHECK(d.domain_begin() == 0.0);
    CHECK(d.domain_end() == 9000.0);
    CHECK_THROWS_AS(d(9000.5), std::out_of_range);

    const PdpEnvelope f(builtin_profile("Flat"));
    CHECK(f.domain_begin() == 0.0);
    CHECK(f.domain_end() == 0.0);
    CHECK(f(0.0) == 0.0);
    CHECK_FALSE(f.contains(1.0));

    // Linear-power mode: midpoint of 0 dB and -10 dB is 10 log10(0.55).
    const PdpEnvelope lin(PowerDelayProfile({{0.0, 0.0}, {100.0, -10.0}}), EnvelopeScale::linear);
    CHECK_THAT(lin(50.0), WithinAbs(10.0 * std::log10(0.55), 1e-12));
}

TEST_CASE("Envelope - matches the linear-search oracle everywhere")
{
    for (const auto &p : catalog())
    {
        const PdpEnvelope e(p);
        for (double t = p.first_delay_ns(); t <= p.max_delay_ns(); t += 7.3)
            CHECK_THAT(e(t), WithinAbs(*oracle::envelope_db(p, t), 1e-9));
    }
}

TEST_CASE("is_applicable - examples")
{
    CHECK(is_applicable(builtin_profile("EPA"), builtin_profile("Designed"), 0.0).applicable);

    const auto r = is_applicable(builtin_profile("Designed"), builtin_profile("ETU"), 0.0);
    CHECK_FALSE(r.applicable);
    REQUIRE(has_kind(r, ViolationKind::max_delay));
    for (const auto &v : r.violations)
    {
        if (v.kind == ViolationKind::max_delay)
            CHECK(v.margin == 4000.0);
        if (v.kind == ViolationKind::tap_count)
            CHECK(v.margin == 1.0);
    }

    CHECK(is_applicable(builtin_profile("Flat"), builtin_profile("EPA"), 0.0).applicable);
    CHECK_FALSE(is_applicable(builtin_profile("EPA"), builtin_profile("Flat"), 0.0).applicable);
    CHECK_THROWS_AS(is_applicable(builtin_profile("EPA"), builtin_profile("Flat"), -1.0), std::invalid_argument);
}

TEST_CASE("is_applicable - violation runs carry the worst margin")
{
    // Candidate pokes 2 dB above the designed line over [100, 300] with a peak at 200.
    const PowerDelayProfile des({{0.0, 0.0}, {1000.0, 0.0}});
    const PowerDelayProfile cand({{0.0, -5.0}, {100.0, 0.0}, {200.0, 2.0}, {300.0, 0.0}, {400.0, -5.0}});
    const auto r = is_applicable(cand, des, 0.0);
    CHECK_FALSE(r.applicable);
    REQUIRE(r.violations.size() == 2); // one envelope run plus the tap count
    CHECK(r.violations[0].kind == ViolationKind::envelope);
    CHECK(r.violations[0].delay_ns == 200.0);
    CHECK_THAT(r.violations[0].margin, WithinAbs(2.0, 1e-12));
    CHECK(r.violations[1].kind == ViolationKind::tap_count);

    CHECK(is_applicable(cand, des, 2.0).violations.size() == 1);

    const auto j = nlohmann::json::parse(r.to_json("cand", "des", 0.0));
    CHECK(j["applicable"] == false);
    CHECK(j["violations"][0]["kind"] == "envelope");
}

TEST_CASE("is_applicable - reflexive and transitive over the catalog")
{
    const auto cat = catalog();
    for (const auto &p : cat)
    {
        CHECK(is_applicable(p, p, 0.0).applicable);
        CHECK(is_applicable(p, p, 0.0, EnvelopeScale::linear).applicable);
    }
    for (const auto &a : cat)
        for (const auto &b : cat)
            for (const auto &c : cat)
                if (is_applicable(a, b, 0.0).applicable && is_applicable(b, c, 0.0).applicable)
                {
                    INFO(a.name() << " <= " << b.name() << " <= " << c.name());
                    CHECK(is_applicable(a, c, 0.0).applicable);
                }
}

TEST_CASE("is_applicable - agrees with the dense-grid oracle")
{
    const auto cat = catalog();
    for (double tol : {0.0, 0.5, 1.0, 2.0})
        for (const auto &cand : cat)
            for (const auto &des : cat)
            {
                INFO(cand.name() << " under " << des.name() << " tol " << tol);
                CHECK(is_applicable(cand, des, tol).applicable == oracle::applicable(cand, des, tol));
            }

    std::mt19937_64 rng(42);
    for (int i = 0; i < 300; ++i)
    {
        const auto a = random_pdp(rng), b = random_pdp(rng);
        INFO(profile_to_json_text(a) << " / " << profile_to_json_text(b));
        CHECK(is_applicable(a, b, 0.5).applicable == oracle::applicable(a, b, 0.5));
    }
}

TEST_CASE("Applicability matrix - training catalog at 1 dB")
{
    const std::vector<std::string> names = {"Designed", "DC3", "ETU", "EPA", "Flat"};
    std::vector<PowerDelayProfile> p;
    for (const auto &n : names)
        p.push_back(builtin_profile(n));
    const auto m = applicability_matrix(p, 1.0);
    // rows: designed (training) channel, columns: candidate (test) channel
    const std::vector<std::vector<bool>> expected = {
        {true, true, true, true, true},    // Designed
        {false, true, false, true, true},  // DC3
        {false, false, true, true, true},  // ETU
        {false, false, false, true, true}, // EPA
        {false, false, false, false, true} // Flat
    };
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = 0; j < names.size(); ++j)
        {
            INFO(names[j] << " under " << names[i]);
            CHECK(m[i][j] == expected[i][j]);
            CHECK(m[i][j] == oracle::applicable(p[j], p[i], 1.0));
        }

    for (const auto &n : test_channel_names())
        CHECK(is_applicable(builtin_profile(n), builtin_profile("Designed"), 1.0).applicable);
}

TEST_CASE("Autocorrelation matrix")
{
    const auto R = autocorrelation_matrix(builtin_profile("Flat"), frame);
    CHECK(arma::abs(R - 1.0).max() < 1e-15);

    const auto d = builtin_profile("Designed");
    const auto Rd = autocorrelation_matrix(d, frame);
    CHECK(arma::abs(Rd - Rd.t()).max() == 0.0);
    const auto all = oracle::iota(72);
    CHECK(arma::abs(Rd - oracle::wssus_correlation(d, all, all, 15e3)).max() < 1e-10);
}

TEST_CASE("Autocorrelation matrix - empirical DC1 converges", "[montecarlo]")
{
    const auto p = builtin_profile("DC1");
    const auto emp = autocorrelation_matrix(p, frame, EmpiricalCorrelation{10000, 5});
    CHECK(oracle::rel_frobenius(emp, autocorrelation_matrix(p, frame)) < 0.05);
}

TEST_CASE("Eigen spectrum - closed forms")
{
    const auto f = eigen_spectrum(autocorrelation_matrix(builtin_profile("Flat"), frame));
    REQUIRE(f.eigenvalues.size() == 72);
    CHECK_THAT(f.eigenvalues[0], WithinRel(72.0, 1e-12));
    for (std::size_t i = 1; i < 72; ++i)
        CHECK(std::abs(f.eigenvalues[i]) < 1e-10);

    const auto id = eigen_spectrum(arma::eye<arma::cx_mat>(10, 10));
    for (double v : id.eigenvalues)
        CHECK_THAT(v, WithinAbs(1.0, 1e-12));

    arma::cx_mat bad(3, 3, arma::fill::zeros);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(eigen_spectrum(bad), std::invalid_argument);
    CHECK_THROWS_AS(eigen_spectrum(arma::cx_mat(2, 3, arma::fill::zeros)), std::invalid_argument);
}

TEST_CASE("Eigen spectrum - trace equals N_f times total power")
{
    for (const auto &p : catalog())
    {
        INFO(p.name());
        const auto s = eigen_spectrum(autocorrelation_matrix(p, frame));
        CHECK_THAT(s.trace(), WithinRel(72.0 * oracle::total_power(p), 1e-3));
        CHECK(std::is_sorted(s.eigenvalues.rbegin(), s.eigenvalues.rend()));
    }
}

TEST_CASE("Eigen comparison")
{
    const auto d = eigen_spectrum(autocorrelation_matrix(builtin_profile("Designed"), frame));
    const auto same = eigen_compare(d, d, 8, 0.01);
    CHECK(same.elementwise_all);
    CHECK(same.rank_designed == same.rank_candidate);
    CHECK(same.rank_dominates);

    const auto f = eigen_spectrum(autocorrelation_matrix(builtin_profile("Flat"), frame));
    CHECK(eigen_compare(d, f, 8, 0.01).elementwise_all);

    const auto e = eigen_spectrum(autocorrelation_matrix(builtin_profile("EPA"), frame));
    const auto c = eigen_compare(d, e, 8, 0.01);
    CHECK(c.rank_dominates);
    CHECK(c.rank_designed > c.rank_candidate);
    CHECK(c.elementwise.size() == 8);
}

TEST_CASE("suggest_envelope - examples")
{
    const auto epa = builtin_profile("EPA");
    const std::vector<PowerDelayProfile> one = {epa};
    const auto s1 = suggest_envelope(one, 0.0, 0.0);
    REQUIRE(s1.size() == epa.size());
    for (std::size_t i = 0; i < epa.size(); ++i)
    {
        CHECK_THAT(s1.taps()[i].delay_ns, WithinAbs(epa.taps()[i].delay_ns, 1e-9));
        CHECK_THAT(s1.taps()[i].gain_db, WithinAbs(epa.taps()[i].gain_db, 1e-9));
    }

    const std::vector<PowerDelayProfile> ft = {builtin_profile("Flat"), builtin_profile("TwoPath")};
    const auto s2 = suggest_envelope(ft, 0.0, 0.0);
    CHECK(s2.max_delay_ns() == 5000.0);
    for (const auto &p : ft)
        CHECK(is_applicable(p, s2, 0.0).applicable);

    std::vector<PowerDelayProfile> eight;
    for (const auto &n : test_channel_names())
        eight.push_back(builtin_profile(n));
    const auto s3 = suggest_envelope(eight, 0.0, 2000.0);
    CHECK(s3.max_delay_ns() == 9000.0);
    for (const auto &p : eight)
    {
        INFO(p.name());
        CHECK(is_applicable(p, s3, 0.0).applicable);
    }

    const std::vector<PowerDelayProfile> none;
    CHECK_THROWS_AS(suggest_envelope(none, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(suggest_envelope(one, -1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(suggest_envelope(one, 0.0, -1.0), std::invalid_argument);
}

TEST_CASE("suggest_envelope - output covers every random input set")
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> count(1, 5);
    std::uniform_real_distribution<double> margin(0.0, 3.0), extra(0.0, 1000.0);
    for (int trial = 0; trial < 200; ++trial)
    {
        std::vector<PowerDelayProfile> in;
        const int n = count(rng);
        for (int i = 0; i < n; ++i)
            in.push_back(random_pdp(rng));
        const double mg = margin(rng), ex = trial % 2 ? extra(rng) : 0.0;
        const auto s = suggest_envelope(in, mg, ex);
        for (const auto &p : in)
        {
            INFO("trial " << trial << ": " << profile_to_json_text(p) << " vs " << profile_to_json_text(s));
            CHECK(is_applicable(p, s, 0.0).applicable);
            CHECK(oracle::applicable(p, s, 0.0));
        }
    }
}
