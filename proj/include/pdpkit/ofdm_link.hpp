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

#ifndef PDPKIT_OFDM_LINK_HPP
#define PDPKIT_OFDM_LINK_HPP

#include "pdpkit/fading.hpp"
#include "pdpkit/frame.hpp"

#include <armadillo>
#include <cstdint>
#include <span>
#include <string>

namespace pdpkit
{
/// Transmitted resource grid X(k, l) of one slot, [n_subcarriers, n_symbols].
struct SlotGrid
{
    arma::cx_mat X;
};

/// Number of QPSK data resource elements (every RE of the non-pilot symbols).
std::size_t data_re_count(const DmrsPattern &pattern, const FrameConfig &frame);

/// QPSK on data REs, (b0, b1) -> ((1 - 2 b0) + j (1 - 2 b1)) / sqrt(2), filled symbol by
/// symbol in ascending subcarrier order. Pilot REs carry the pilot value, the other REs
/// of a pilot symbol are zero. Requires exactly 2 * data_re_count bits (values 0/1).
SlotGrid build_slot(std::span<const std::uint8_t> bits, const DmrsPattern &pattern, const FrameConfig &frame);

/// Same, with the data bits drawn from the seed.
SlotGrid build_slot(const DmrsPattern &pattern, const FrameConfig &frame, std::uint64_t seed);

/// Complex white Gaussian noise with per-RE variance 10^(-snr_db / 10) (SNR is referenced
/// to unit data-symbol power). snr_noise_off adds nothing.
void add_noise(arma::cx_mat &grid, double snr_db, std::uint64_t seed);

/// Y = H o X + W.
arma::cx_mat transmit_receive_fd(const SlotGrid &slot, const ChannelMatrix &H, double snr_db, std::uint64_t seed);

/// Sample-level link: per symbol IFFT (subcarriers centred in the FFT), cyclic prefix of
/// cp_length + impl_delay samples, tapped delay line with delays rounded to the sample grid,
/// CP removal, FFT, subcarrier extraction, AWGN.
///
/// The whole slot is filtered as one stream preceded by a random previous slot, so taps
/// longer than the CP produce inter-symbol interference. Taps are phase-aligned so that,
/// within the CP, Y equals freq_response(quantize_delays(r)) o X exactly.
/// Throws std::invalid_argument if a tap delay exceeds the slot length.
arma::cx_mat transmit_receive_td(const SlotGrid &slot, const ChannelRealization &r, const FrameConfig &frame,
                                 double snr_db, std::uint64_t seed);

/// Pilot grid [n_pilot_subcarriers, n_pilot_symbols]: (r, c) = Y(comb_offset + comb_spacing * r, pilot_symbols[c]).
arma::cx_mat extract_pilots(const arma::cx_mat &Y, const DmrsPattern &pattern, const FrameConfig &frame);

// Debug grid dump: one line of JSON header ({"name","rows","cols","dtype":"complex64",
// "order":"row-major"}) followed by rows*cols little-endian (float32 re, float32 im) pairs.
void write_grid_dump(const std::string &path, const arma::cx_mat &grid, const std::string &name);
arma::cx_mat read_grid_dump(const std::string &path);
} // namespace pdpkit

#endif
