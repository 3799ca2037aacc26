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

#include "pdpkit/slot_sim.hpp"
#include "pdpkit/ofdm_link.hpp"

namespace pdpkit
{
SlotOutcome simulate_slot(const ChannelSpec &spec, const DmrsPattern &pattern, const FrameConfig &frame,
                          double snr_db, std::uint64_t slot_seed, LinkPath path)
{
    const auto times = frame.symbol_start_times();
    const auto realization = generate_realization(spec, derive_seed(slot_seed, stream::channel), times);
    const SlotGrid slot = build_slot(pattern, frame, derive_seed(slot_seed, stream::data));
    const std::uint64_t noise_seed = derive_seed(slot_seed, stream::noise);

    SlotOutcome out;
    if (path == LinkPath::frequency_domain)
    {
        out.H = freq_response(realization, frame);
        out.Y = transmit_receive_fd(slot, out.H, snr_db, noise_seed);
    }
    else
    {
        out.H = freq_response(quantize_delays(realization, frame), frame);
        out.Y = transmit_receive_td(slot, realization, frame, snr_db, noise_seed);
    }
    out.ls = ls_estimate(extract_pilots(out.Y, pattern, frame), pattern);
    return out;
}

std::uint64_t name_hash(std::string_view name)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : name)
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}
} // namespace pdpkit
