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

#ifndef PDPKIT_FRAME_HPP
#define PDPKIT_FRAME_HPP

#include "pdpkit/common.hpp"

#include <cstddef>
#include <vector>

namespace pdpkit
{
/// OFDM numerology of one slot.
///
/// The sample rate is fft_size * subcarrier spacing (1.92 MHz by default). The cyclic
/// prefix spans cp_length + impl_delay samples, so the default CP lasts 16 / 1.92 MHz,
/// about 8333 ns.
struct FrameConfig
{
    std::size_t n_subcarriers = 72;
    std::size_t n_symbols = 14;
    double subcarrier_spacing_hz = 15e3;
    std::size_t fft_size = 128;
    std::size_t cp_length = 9;
    std::size_t impl_delay = 7;
    double carrier_hz = 2.1e9;

    double sample_rate_hz() const { return static_cast<double>(fft_size) * subcarrier_spacing_hz; }
    std::size_t cp_samples() const { return cp_length + impl_delay; }
    std::size_t symbol_samples() const { return fft_size + cp_samples(); }
    std::size_t slot_samples() const { return symbol_samples() * n_symbols; }
    double symbol_duration_s() const { return static_cast<double>(symbol_samples()) / sample_rate_hz(); }
    double cp_duration_s() const { return static_cast<double>(cp_samples()) / sample_rate_hz(); }

    /// Start time of each OFDM symbol relative to the slot start.
    std::vector<double> symbol_start_times() const;

    void validate() const;
};

/// Comb-type DM-RS layout. Pilot REs sit on subcarriers comb_offset + comb_spacing * r
/// of every pilot symbol; the remaining REs of a pilot symbol are left empty.
struct DmrsPattern
{
    std::vector<std::size_t> pilot_symbols{2, 11};
    std::size_t comb_offset = 0;
    std::size_t comb_spacing = 2;
    cx pilot_value{1.0, 1.0};

    static DmrsPattern default_pattern() { return {}; }
    static DmrsPattern alternative_pattern() { return {{2, 7, 11}, 1, 2, {1.0, 1.0}}; }

    std::size_t n_pilot_symbols() const { return pilot_symbols.size(); }
    std::size_t n_pilot_subcarriers(const FrameConfig &frame) const;
    std::vector<std::size_t> pilot_subcarriers(const FrameConfig &frame) const;
    bool is_pilot_symbol(std::size_t symbol) const;

    void validate(const FrameConfig &frame) const;
};
} // namespace pdpkit

#endif
