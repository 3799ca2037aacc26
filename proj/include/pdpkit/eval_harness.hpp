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

#ifndef PDPKIT_EVAL_HARNESS_HPP
#define PDPKIT_EVAL_HARNESS_HPP

#include "pdpkit/channel_models.hpp"
#include "pdpkit/dataset.hpp"
#include "pdpkit/frame.hpp"
#include "pdpkit/slot_sim.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pdpkit
{
struct EvalPoint
{
    std::string estimator;
    std::string channel;
    double snr_db = 0.0;
    std::optional<double> ds_ns;
    std::size_t n = 0;
    double mse = 0.0;
    double stderr_mse = 0.0;
};

/// Estimator selector.
///   "ls"          LS + bilinear interpolation
///   "mmse"        MMSE with correlations of the channel under test
///   "mmse:<sel>"  MMSE with correlations of another channel (any channel selector)
///   "external"    estimates read from prediction files
struct EstimatorSpec
{
    enum class Kind
    {
        ls,
        mmse_matched,
        mmse_stats,
        external
    };

    Kind kind = Kind::ls;
    std::string stats_selector; // mmse_stats only

    static EstimatorSpec parse(const std::string &text);
    std::string id() const;
};

struct EvalConfig
{
    FrameConfig frame;
    DmrsPattern pattern;
    Range doppler_hz{0.0, 97.0};
    std::size_t n = 5000;
    std::uint64_t base_seed = 0;
    bool normalize_power = false;
    unsigned threads = 0;           // 0 = all cores
    std::string predictions_dir;    // external estimator only
};

/// A named test channel.
struct NamedChannel
{
    std::string name;
    PowerDelayProfile pdp;
};

/// Slot seed of realization i on a channel. Depends only on (base_seed, channel name, i),
/// so every estimator and every SNR point sees the same channel draws.
std::uint64_t eval_slot_seed(std::uint64_t base_seed, const std::string &channel, std::size_t i);

/// Mean MSE (average |H_hat - H|^2 over the slot) for n independent slots per
/// (channel, SNR). Doppler is drawn uniformly per slot.
std::vector<EvalPoint> mse_vs_snr(const EstimatorSpec &estimator, std::span<const NamedChannel> channels,
                                  std::span<const double> snr_grid, const EvalConfig &config);

struct GeneralizationGrid
{
    std::vector<std::string> train;
    std::vector<std::string> test;
    std::vector<std::vector<EvalPoint>> cells; // [train][test]

    std::vector<EvalPoint> flatten() const;
};

/// Train x test MSE matrix at one SNR. For the MMSE family the train channel supplies the
/// correlation statistics; for the external family prediction files are read from
/// <predictions_dir>/<train>/<test>.bin.
GeneralizationGrid generalization_grid(EstimatorSpec::Kind family, std::span<const NamedChannel> train,
                                       std::span<const NamedChannel> test, double snr_db, const EvalConfig &config);

/// Delay-spread sweep over CDL profiles on the time-domain link path.
std::vector<EvalPoint> ds_sweep(const EstimatorSpec &estimator, std::span<const CdlProfile> profiles,
                                std::span<const double> ds_grid_ns, double snr_db, const EvalConfig &config);

/// Writes the inputs/labels the harness evaluates for (channel, snr) as a sample file, so an
/// external model can produce a matching prediction file.
void export_eval_set(const NamedChannel &channel, double snr_db, const EvalConfig &config, const std::string &path,
                     LinkPath path_kind = LinkPath::frequency_domain);

/// Prediction file name for an eval cell: "<channel>_snr<snr>.bin".
std::string prediction_file_name(const std::string &channel, double snr_db);
} // namespace pdpkit

#endif
