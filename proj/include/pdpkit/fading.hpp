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

#ifndef PDPKIT_FADING_HPP
#define PDPKIT_FADING_HPP

#include "pdpkit/channel_models.hpp"
#include "pdpkit/frame.hpp"

#include <armadillo>
#include <cstdint>
#include <span>
#include <vector>

namespace pdpkit
{
/// Frequency-domain channel H(k, l), size [n_subcarriers, n_symbols].
using ChannelMatrix = arma::cx_mat;

/// Complex tap-gain trajectories of one slot, sampled at the given symbol start times.
struct ChannelRealization
{
    arma::cx_mat tap_gains;          // [n_taps, n_times]
    arma::vec delays_s;              // [n_taps]
    ChannelSpec spec;
    std::uint64_t seed = 0;
    std::vector<double> symbol_times; // seconds
};

// Sinusoids per quadrature component of the sum-of-sinusoids generator.
inline constexpr std::size_t sos_sinusoids = 20;

/// Rayleigh tapped-delay-line realization (sum-of-sinusoids, generalized method of exact
/// Doppler spread). Each tap is an independent process whose variance equals its linear
/// PDP power and whose autocorrelation approaches J0(2 pi f_max tau).
///
/// Deterministic in (spec, seed, symbol_times).
ChannelRealization generate_realization(const ChannelSpec &spec, std::uint64_t seed,
                                        std::span<const double> symbol_times);

/// H(k, l) = sum_m g_m(l) exp(-j 2 pi k df tau_m).
ChannelMatrix freq_response(const ChannelRealization &r, const FrameConfig &frame);

/// Tap delays rounded to the nearest sample at the frame sample rate.
std::vector<std::size_t> delay_samples(const ChannelRealization &r, const FrameConfig &frame);

/// Same realization with its delays snapped to the sample grid, i.e. the channel the
/// time-domain link actually applies.
ChannelRealization quantize_delays(const ChannelRealization &r, const FrameConfig &frame);
} // namespace pdpkit

#endif
