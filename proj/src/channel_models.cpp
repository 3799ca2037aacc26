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

#include "pdpkit/channel_models.hpp"
#include "pdpkit/common.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace pdpkit
{
namespace detail
{
extern const char *const cdl_tables_json;
}

namespace
{
std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

struct BuiltinTable
{
    const char *name;
    std::vector<double> delays_ns;
    std::vector<double> gains_db;
};

const std::vector<BuiltinTable> &builtin_tables()
{
    // EPA/EVA/ETU: 3GPP TS 36.101 Annex B.2. The rest are the customized and designed channels.
    static const std::vector<BuiltinTable> tables = {
        {"Flat", {0.0}, {0.0}},
        {"DC1", {0, 50, 100, 200, 400}, {0.0, -2.0, -4.0, -8.0, -16.0}},
        {"DC2", {0, 30, 200, 300, 500, 1500, 2500, 5000}, {-7.0, 0.0, 0.0, -1.0, -2.0, -1.0, -1.0, -5.5}},
        {"DC3",
         {0, 50, 120, 200, 230, 500, 1600, 2300, 5000, 7000},
         {0.0, -1.0, -1.0, -1.0, -1.0, -1.5, -1.5, -1.5, -3.0, -5.0}},
        {"TwoPath", {50, 5000}, {-3.0, -3.0}},
        {"EPA", {0, 30, 70, 90, 110, 190, 410}, {0.0, -1.0, -2.0, -3.0, -8.0, -17.2, -20.8}},
        {"EVA",
         {0, 30, 150, 310, 370, 710, 1090, 1730, 2510},
         {0.0, -1.5, -1.4, -3.6, -0.6, -9.1, -7.0, -12.0, -16.9}},
        {"ETU",
         {0, 50, 120, 200, 230, 500, 1600, 2300, 5000},
         {-1.0, -1.0, -1.0, 0.0, 0.0, 0.0, -3.0, -5.0, -7.0}},
        {"Designed",
         {0, 30, 200, 300, 500, 1500, 2500, 5000, 7000, 9000},
         {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0, -1.0, -2.0, -4.0}},
    };
    return tables;
}

struct CdlCatalog
{
    int version = 0;
    std::vector<CdlProfile> profiles;
};

const CdlCatalog &cdl_catalog()
{
    static const CdlCatalog catalog = []
    {
        auto j = nlohmann::json::parse(detail::cdl_tables_json);
        CdlCatalog c;
        c.version = j.at("version").get<int>();
        for (const auto &p : j.at("profiles"))
        {
            CdlProfile prof{p.at("name").get<std::string>(),
                            p.at("normalized_delays").get<std::vector<double>>(),
                            p.at("cluster_powers_db").get<std::vector<double>>()};
            if (prof.normalized_delays.size() != prof.cluster_powers_db.size() || prof.normalized_delays.empty())
                throw std::logic_error("CDL table " + prof.name + " is malformed");
            c.profiles.push_back(std::move(prof));
        }
        return c;
    }();
    return catalog;
}
} // namespace

PowerDelayProfile::PowerDelayProfile(std::vector<Tap> taps, std::string name)
    : taps_(std::move(taps)), name_(std::move(name))
{
    if (taps_.empty())
        throw std::invalid_argument("Power delay profile needs at least one tap.");

    for (std::size_t i = 0; i < taps_.size(); ++i)
    {
        const auto &t = taps_[i];
        if (!std::isfinite(t.delay_ns) || !std::isfinite(t.gain_db))
            throw std::invalid_argument("Power delay profile '" + name_ + "' has a non-finite entry.");
        if (t.delay_ns < 0.0)
            throw std::invalid_argument("Power delay profile '" + name_ + "' has a negative delay.");
        if (i > 0 && !(t.delay_ns > taps_[i - 1].delay_ns))
            throw std::invalid_argument("Power delay profile '" + name_ + "' delays must be strictly increasing.");
    }
}

PowerDelayProfile PowerDelayProfile::from_vectors(const std::vector<double> &delays_ns,
                                                  const std::vector<double> &gains_db,
                                                  std::string name)
{
    if (delays_ns.size() != gains_db.size())
        throw std::invalid_argument("Delay and gain lists differ in length.");

    std::vector<Tap> taps(delays_ns.size());
    for (std::size_t i = 0; i < taps.size(); ++i)
        taps[i] = {delays_ns[i], gains_db[i]};
    return PowerDelayProfile(std::move(taps), std::move(name));
}

arma::vec PowerDelayProfile::delays_s() const
{
    arma::vec d(taps_.size());
    for (std::size_t i = 0; i < taps_.size(); ++i)
        d[i] = taps_[i].delay_ns * 1e-9;
    return d;
}

arma::vec PowerDelayProfile::linear_powers() const
{
    arma::vec p(taps_.size());
    for (std::size_t i = 0; i < taps_.size(); ++i)
        p[i] = db_to_linear(taps_[i].gain_db);
    return p;
}

double PowerDelayProfile::total_linear_power() const
{
    KahanSum s;
    for (const auto &t : taps_)
        s.add(db_to_linear(t.gain_db));
    return s.value();
}

PowerDelayProfile PowerDelayProfile::renamed(std::string name) const
{
    return PowerDelayProfile(taps_, std::move(name));
}

bool PowerDelayProfile::operator==(const PowerDelayProfile &other) const
{
    if (taps_.size() != other.taps_.size())
        return false;
    for (std::size_t i = 0; i < taps_.size(); ++i)
        if (taps_[i].delay_ns != other.taps_[i].delay_ns || taps_[i].gain_db != other.taps_[i].gain_db)
            return false;
    return true;
}

PowerDelayProfile ChannelSpec::effective_pdp() const
{
    return normalize_power ? pdpkit::normalize_power(pdp) : pdp;
}

void ChannelSpec::validate(double symbol_duration_s) const
{
    if (!std::isfinite(max_doppler_hz) || max_doppler_hz < 0.0)
        throw std::invalid_argument("Maximum Doppler frequency must be finite and non-negative.");
    if (symbol_duration_s <= 0.0)
        throw std::invalid_argument("Symbol duration must be positive.");
    if (max_doppler_hz > 1.0 / (2.0 * symbol_duration_s))
        throw std::invalid_argument("Maximum Doppler frequency exceeds half the symbol rate.");
}

PowerDelayProfile builtin_profile(std::string_view name)
{
    const auto key = lower(name);
    for (const auto &t : builtin_tables())
        if (lower(t.name) == key)
            return PowerDelayProfile::from_vectors(t.delays_ns, t.gains_db, t.name);

    std::string msg = "Unknown channel profile '" + std::string(name) + "'. Valid names:";
    for (const auto &n : builtin_profile_names())
        msg += " " + n;
    throw std::invalid_argument(msg);
}

const std::vector<std::string> &builtin_profile_names()
{
    static const std::vector<std::string> names = []
    {
        std::vector<std::string> n;
        for (const auto &t : builtin_tables())
            n.emplace_back(t.name);
        return n;
    }();
    return names;
}

const std::vector<std::string> &test_channel_names()
{
    static const std::vector<std::string> names = {"Flat", "EPA", "EVA", "ETU", "DC1", "DC2", "DC3", "TwoPath"};
    return names;
}

const std::vector<CdlProfile> &cdl_profiles() { return cdl_catalog().profiles; }

int cdl_tables_version() { return cdl_catalog().version; }

const CdlProfile &cdl_profile(std::string_view name)
{
    const auto key = lower(name);
    for (const auto &p : cdl_profiles())
        if (lower(p.name) == key)
            return p;
    throw std::invalid_argument("Unknown CDL profile '" + std::string(name) + "'. Valid names: CDL-A CDL-B CDL-C");
}

PowerDelayProfile scale_cdl(const CdlProfile &profile, double ds_desired_ns)
{
    if (!(ds_desired_ns > 0.0) || !std::isfinite(ds_desired_ns))
        throw std::invalid_argument("Desired delay spread must be positive and finite.");

    std::vector<std::size_t> order(profile.normalized_delays.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b)
                     { return profile.normalized_delays[a] < profile.normalized_delays[b]; });

    std::vector<Tap> taps;
    taps.reserve(order.size());
    for (auto i : order)
        taps.push_back({profile.normalized_delays[i] * ds_desired_ns, profile.cluster_powers_db[i]});

    std::ostringstream name;
    name << profile.name << ":" << ds_desired_ns;
    return PowerDelayProfile(std::move(taps), name.str());
}

PowerDelayProfile normalize_power(const PowerDelayProfile &pdp)
{
    const double offset_db = linear_to_db(pdp.total_linear_power());
    std::vector<Tap> taps = pdp.taps();
    for (auto &t : taps)
        t.gain_db -= offset_db;
    return PowerDelayProfile(std::move(taps), pdp.name());
}

PowerDelayProfile profile_from_json_text(const std::string &text)
{
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(text);
        return PowerDelayProfile::from_vectors(j.at("delays_ns").get<std::vector<double>>(),
                                               j.at("gains_db").get<std::vector<double>>(),
                                               j.value("name", std::string("custom")));
    }
    catch (const nlohmann::json::exception &e)
    {
        throw std::invalid_argument(std::string("Invalid profile JSON: ") + e.what());
    }
}

PowerDelayProfile load_profile_json(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("Cannot open profile file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return profile_from_json_text(ss.str());
}

std::string profile_to_json_text(const PowerDelayProfile &pdp)
{
    nlohmann::json j;
    j["name"] = pdp.name();
    std::vector<double> d, g;
    for (const auto &t : pdp.taps())
    {
        d.push_back(t.delay_ns);
        g.push_back(t.gain_db);
    }
    j["delays_ns"] = d;
    j["gains_db"] = g;
    return j.dump(2);
}

PowerDelayProfile resolve_channel(std::string_view selector)
{
    const std::string sel(selector);
    if (sel.ends_with(".json") || std::filesystem::is_regular_file(sel))
        return load_profile_json(sel);

    if (lower(sel).starts_with("cdl-"))
    {
        const auto colon = sel.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("CDL selector needs a delay spread, e.g. CDL-B:300");
        double ds = 0.0;
        try
        {
            std::size_t used = 0;
            ds = std::stod(sel.substr(colon + 1), &used);
            if (used != sel.size() - colon - 1)
                throw std::invalid_argument("trailing characters");
        }
        catch (const std::exception &)
        {
            throw std::invalid_argument("Bad delay spread in selector '" + sel + "'");
        }
        return scale_cdl(cdl_profile(sel.substr(0, colon)), ds);
    }
    return builtin_profile(sel);
}
} // namespace pdpkit
