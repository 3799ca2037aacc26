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

#ifndef PDPKIT_SLOT_SIM_HPP
#define PDPKIT_SLOT_SIM_HPP

#include "pdpkit/estimators.hpp"
#include "pdpkit/fading.hpp"
#include "pdpkit/frame.hpp"

#include <cstdint>

namespace pdpkit
{
enum class LinkPath
{
    frequency_domain, // Y = H o X + W
    time_domain       // IFFT / CP / tapped delay line / FFT
};

/// One simulated slot: ground-truth channel, received grid and the LS pilot estimate.
/// On the time-domain path H is the response of the sample-quantized channel.
struct SlotOutcome
{
    ChannelMatrix H;
    arma::cx_mat Y;
    PilotEstimate ls;
};

/// Channel, data and noise are drawn from independent sub-streams of slot_seed.
SlotOutcome simulate_slot(const ChannelSpec &spec, const DmrsPattern &pattern, const FrameConfig &frame,
                          double snr_db, std::uint64_t slot_seed, LinkPath path = LinkPath::frequency_domain);

/// Stable 64-bit hash of a name (FNV-1a), used to key per-channel seed streams.
std::uint64_t name_hash(std::string_view name);
} // namespace pdpkit

#endif
