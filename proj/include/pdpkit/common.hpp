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

#ifndef PDPKIT_COMMON_HPP
#define PDPKIT_COMMON_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>

namespace pdpkit
{
using cx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

// Passing this as SNR disables the noise source.
inline constexpr double snr_noise_off = std::numeric_limits<double>::infinity();

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// SplitMix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Per-realization seed derived from a base seed and a counter. Independent of
/// evaluation order, so parallel and serial runs draw identical realizations.
constexpr std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index)
{
    return mix64(mix64(base_seed) ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

// Stream tags used to split one slot seed into independent sub-streams.
namespace stream
{
inline constexpr std::uint64_t channel = 1;
inline constexpr std::uint64_t data = 2;
inline constexpr std::uint64_t noise = 3;
inline constexpr std::uint64_t draw = 4;
inline constexpr std::uint64_t previous_slot = 5;
} // namespace stream

// Compensated accumulator; summing a fixed sequence gives the same result
// whichever thread produced the terms.
class KahanSum
{
public:
    void add(double x)
    {
        double y = x - c_;
        double t = sum_ + y;
        c_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double c_ = 0.0;
};
} // namespace pdpkit

#endif
