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

#include "pdpkit/fading.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace pdpkit
{
ChannelRealization generate_realization(const ChannelSpec &spec, std::uint64_t seed,
                                        std::span<const double> symbol_times)
{
    if (symbol_times.empty())
        throw std::invalid_argument("generate_realization: symbol_times is empty.");
    if (!std::isfinite(spec.max_doppler_hz) || spec.max_doppler_hz < 0.0)
        throw std::invalid_argument("generate_realization: invalid maximum Doppler frequency.");

    double min_step = 0.0;
    for (std::size_t i = 1; i < symbol_times.size(); ++i)
    {
        const double step = symbol_times[i] - symbol_times[i - 1];
        if (step < 0.0)
            throw std::invalid_argument("generate_realization: symbol_times must be non-decreasing.");
        if (step > 0.0 && (min_step == 0.0 || step < min_step))
            min_step = step;
    }
    if (min_step > 0.0)
        spec.validate(min_step);

    const PowerDelayProfile pdp = spec.effective_pdp();
    const arma::vec power = pdp.linear_powers();
    const std::size_t n_taps = pdp.size();
    const std::size_t n_times = symbol_times.size();
    const std::size_t N = sos_sinusoids;
    const double fmax = spec.max_doppler_hz;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase_dist(0.0, two_pi);

    ChannelRealization r{arma::cx_mat(n_taps, n_times), pdp.delays_s(), spec, seed,
                         std::vector<double>(symbol_times.begin(), symbol_times.end())};

    const double amp = std::sqrt(2.0 / static_cast<double>(N));
    std::vector<double> freq(N), phase(N);

    for (std::size_t m = 0; m < n_taps; ++m)
    {
        arma::vec mu[2];
        for (int i = 0; i < 2; ++i)
        {
            // Angle-of-arrival rotation: opposite sign for I and Q, and a per-tap step so
            // that different taps use disjoint Doppler frequencies.
            const double sign = (i == 0) ? 1.0 : -1.0;
            const double alpha0 = sign * pi / (4.0 * N) * static_cast<double>(m + 1) / static_cast<double>(n_taps + 2);
            for (std::size_t n = 0; n < N; ++n)
            {
                const double alpha = pi / (2.0 * N) * (static_cast<double>(n) + 0.5) + alpha0;
                freq[n] = fmax * std::cos(alpha);
                phase[n] = phase_dist(rng);
            }

            mu[i].zeros(n_times);
            for (std::size_t t = 0; t < n_times; ++t)
            {
                double acc = 0.0;
                for (std::size_t n = 0; n < N; ++n)
                    acc += std::cos(two_pi * freq[n] * symbol_times[t] + phase[n]);
                mu[i][t] = amp * acc;
            }
        }

        const double scale = std::sqrt(power[m] / 2.0);
        for (std::size_t t = 0; t < n_times; ++t)
            r.tap_gains(m, t) = scale * cx(mu[0][t], mu[1][t]);
    }
    return r;
}

ChannelMatrix freq_response(const ChannelRealization &r, const FrameConfig &frame)
{
    if (r.tap_gains.n_cols != frame.n_symbols)
        throw std::invalid_argument("freq_response: realization does not cover the frame's symbols.");

    const std::size_t n_taps = r.delays_s.n_elem;
    arma::cx_mat steering(frame.n_subcarriers, n_taps);
    for (std::size_t m = 0; m < n_taps; ++m)
        for (std::size_t k = 0; k < frame.n_subcarriers; ++k)
        {
            const double ph = -two_pi * static_cast<double>(k) * frame.subcarrier_spacing_hz * r.delays_s[m];
            steering(k, m) = cx(std::cos(ph), std::sin(ph));
        }
    return steering * r.tap_gains;
}

std::vector<std::size_t> delay_samples(const ChannelRealization &r, const FrameConfig &frame)
{
    std::vector<std::size_t> d(r.delays_s.n_elem);
    for (std::size_t m = 0; m < d.size(); ++m)
        d[m] = static_cast<std::size_t>(std::llround(r.delays_s[m] * frame.sample_rate_hz()));
    return d;
}

ChannelRealization quantize_delays(const ChannelRealization &r, const FrameConfig &frame)
{
    ChannelRealization q = r;
    const auto d = delay_samples(r, frame);
    for (std::size_t m = 0; m < d.size(); ++m)
        q.delays_s[m] = static_cast<double>(d[m]) / frame.sample_rate_hz();
    return q;
}
} // namespace pdpkit
