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

#ifndef PDPKIT_CHANNEL_MODELS_HPP
#define PDPKIT_CHANNEL_MODELS_HPP

#include <armadillo>
#include <string>
#include <string_view>
#include <vector>

namespace pdpkit
{
struct Tap
{
    double delay_ns; // >= 0
    double gain_db;  // average path gain
};

/// Ordered multipath (delay, average gain) table.
///
/// Delays are strictly increasing, non-negative and finite; there is at least one tap.
/// Gains stay in dB; conversion to linear power happens only where a consumer needs it.
class PowerDelayProfile
{
public:
    explicit PowerDelayProfile(std::vector<Tap> taps, std::string name = "custom");

    static PowerDelayProfile from_vectors(const std::vector<double> &delays_ns,
                                          const std::vector<double> &gains_db,
                                          std::string name = "custom");

    const std::vector<Tap> &taps() const { return taps_; }
    const std::string &name() const { return name_; }
    std::size_t size() const { return taps_.size(); }

    double first_delay_ns() const { return taps_.front().delay_ns; }
    double max_delay_ns() const { return taps_.back().delay_ns; }

    arma::vec delays_s() const;
    arma::vec linear_powers() const;
    double total_linear_power() const;

    PowerDelayProfile renamed(std::string name) const;

    bool operator==(const PowerDelayProfile &other) const;

private:
    std::vector<Tap> taps_;
    std::string name_;
};

/// What the fading engine consumes: a PDP plus the maximum Doppler frequency.
struct ChannelSpec
{
    PowerDelayProfile pdp;
    double max_doppler_hz = 0.0;
    bool normalize_power = false; // off by default, raw table gains are used

    /// The PDP actually simulated (normalized copy when the flag is set).
    PowerDelayProfile effective_pdp() const;

    /// Throws std::invalid_argument unless 0 <= max_doppler_hz <= 1 / (2 * symbol_duration_s).
    void validate(double symbol_duration_s) const;
};

/// Clustered delay line (NLOS) delay/power table; angles are not carried.
struct CdlProfile
{
    std::string name;
    std::vector<double> normalized_delays; // unitless, first = 0
    std::vector<double> cluster_powers_db;
};

/// Built-in catalog: Flat, DC1, DC2, DC3, TwoPath, EPA, EVA, ETU, Designed (case-insensitive).
PowerDelayProfile builtin_profile(std::string_view name);
const std::vector<std::string> &builtin_profile_names();

/// The eight channels the designed profile is meant to cover.
const std::vector<std::string> &test_channel_names();

const std::vector<CdlProfile> &cdl_profiles();
const CdlProfile &cdl_profile(std::string_view name);
int cdl_tables_version();

/// Delay scaling: delay_n = normalized_delay_n * ds_desired_ns. Taps are re-ordered by
/// delay since the tabulated clusters are not delay-sorted; powers are unchanged.
PowerDelayProfile scale_cdl(const CdlProfile &profile, double ds_desired_ns);

/// Rescales gains so the linear powers sum to one.
PowerDelayProfile normalize_power(const PowerDelayProfile &pdp);

// JSON schema: {"name": str, "delays_ns": [num...], "gains_db": [num...]}
PowerDelayProfile profile_from_json_text(const std::string &text);
PowerDelayProfile load_profile_json(const std::string &path);
std::string profile_to_json_text(const PowerDelayProfile &pdp);

/// Resolves a channel selector: a built-in name, "CDL-x:<ds_ns>" for a scaled CDL
/// profile, or a path to a JSON profile file.
PowerDelayProfile resolve_channel(std::string_view selector);
} // namespace pdpkit

#endif
