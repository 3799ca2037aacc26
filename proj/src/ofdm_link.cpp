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

#include "pdpkit/ofdm_link.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>
#include <vector>

namespace pdpkit
{
std::vector<double> FrameConfig::symbol_start_times() const
{
    std::vector<double> t(n_symbols);
    for (std::size_t l = 0; l < n_symbols; ++l)
        t[l] = static_cast<double>(l) * symbol_duration_s();
    return t;
}

void FrameConfig::validate() const
{
    if (n_subcarriers == 0 || n_symbols == 0 || fft_size == 0)
        throw std::invalid_argument("Frame dimensions must be positive.");
    if (n_subcarriers > fft_size)
        throw std::invalid_argument("Subcarrier count exceeds the FFT size.");
    if (!(subcarrier_spacing_hz > 0.0) || !(carrier_hz > 0.0))
        throw std::invalid_argument("Subcarrier spacing and carrier frequency must be positive.");
}

std::size_t DmrsPattern::n_pilot_subcarriers(const FrameConfig &frame) const
{
    return (frame.n_subcarriers - comb_offset + comb_spacing - 1) / comb_spacing;
}

std::vector<std::size_t> DmrsPattern::pilot_subcarriers(const FrameConfig &frame) const
{
    std::vector<std::size_t> k;
    for (std::size_t i = comb_offset; i < frame.n_subcarriers; i += comb_spacing)
        k.push_back(i);
    return k;
}

bool DmrsPattern::is_pilot_symbol(std::size_t symbol) const
{
    for (auto s : pilot_symbols)
        if (s == symbol)
            return true;
    return false;
}

void DmrsPattern::validate(const FrameConfig &frame) const
{
    if (pilot_symbols.empty())
        throw std::invalid_argument("DM-RS pattern needs at least one pilot symbol.");
    for (std::size_t i = 0; i < pilot_symbols.size(); ++i)
    {
        if (pilot_symbols[i] >= frame.n_symbols)
            throw std::invalid_argument("DM-RS pilot symbol index outside the slot.");
        if (i > 0 && pilot_symbols[i] <= pilot_symbols[i - 1])
            throw std::invalid_argument("DM-RS pilot symbols must be strictly increasing.");
    }
    if (comb_spacing == 0 || comb_offset >= comb_spacing)
        throw std::invalid_argument("DM-RS comb offset must be smaller than the comb spacing.");
    if (frame.n_subcarriers % comb_spacing != 0)
        throw std::invalid_argument("Subcarrier count must be a multiple of the comb spacing.");
    if (pilot_value == cx(0.0, 0.0))
        throw std::invalid_argument("Pilot value must be nonzero.");
}

std::size_t data_re_count(const DmrsPattern &pattern, const FrameConfig &frame)
{
    return (frame.n_symbols - pattern.n_pilot_symbols()) * frame.n_subcarriers;
}

SlotGrid build_slot(std::span<const std::uint8_t> bits, const DmrsPattern &pattern, const FrameConfig &frame)
{
    frame.validate();
    pattern.validate(frame);

    const std::size_t n_data = data_re_count(pattern, frame);
    if (bits.size() != 2 * n_data)
        throw std::invalid_argument("build_slot: expected " + std::to_string(2 * n_data) + " bits, got " +
                                    std::to_string(bits.size()) + ".");

    const double a = 1.0 / std::sqrt(2.0);
    SlotGrid slot{arma::cx_mat(frame.n_subcarriers, frame.n_symbols, arma::fill::zeros)};
    std::size_t b = 0;
    for (std::size_t l = 0; l < frame.n_symbols; ++l)
    {
        if (pattern.is_pilot_symbol(l))
        {
            for (auto k : pattern.pilot_subcarriers(frame))
                slot.X(k, l) = pattern.pilot_value;
            continue;
        }
        for (std::size_t k = 0; k < frame.n_subcarriers; ++k, b += 2)
        {
            if (bits[b] > 1 || bits[b + 1] > 1)
                throw std::invalid_argument("build_slot: bits must be 0 or 1.");
            slot.X(k, l) = cx(a * (1.0 - 2.0 * bits[b]), a * (1.0 - 2.0 * bits[b + 1]));
        }
    }
    return slot;
}

SlotGrid build_slot(const DmrsPattern &pattern, const FrameConfig &frame, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> bits(2 * data_re_count(pattern, frame));
    for (auto &bit : bits)
        bit = static_cast<std::uint8_t>(rng() >> 63);
    return build_slot(bits, pattern, frame);
}

void add_noise(arma::cx_mat &grid, double snr_db, std::uint64_t seed)
{
    const double variance = std::pow(10.0, -snr_db / 10.0);
    if (variance == 0.0)
        return;
    if (!std::isfinite(variance))
        throw std::invalid_argument("add_noise: SNR must not be -inf.");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, std::sqrt(variance / 2.0));
    for (arma::uword i = 0; i < grid.n_elem; ++i)
    {
        const double re = nd(rng);
        const double im = nd(rng);
        grid[i] += cx(re, im);
    }
}

arma::cx_mat transmit_receive_fd(const SlotGrid &slot, const ChannelMatrix &H, double snr_db, std::uint64_t seed)
{
    if (H.n_rows != slot.X.n_rows || H.n_cols != slot.X.n_cols)
        throw std::invalid_argument("transmit_receive_fd: channel and grid dimensions differ.");
    arma::cx_mat Y = H % slot.X;
    add_noise(Y, snr_db, seed);
    return Y;
}

namespace
{
std::size_t fft_bin(std::size_t k, const FrameConfig &frame)
{
    const auto n = static_cast<std::ptrdiff_t>(frame.fft_size);
    const auto b = static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(frame.n_subcarriers / 2);
    return static_cast<std::size_t>(((b % n) + n) % n);
}

arma::cx_vec modulate(const arma::cx_mat &X, const FrameConfig &frame)
{
    const std::size_t N = frame.fft_size, cp = frame.cp_samples(), S = frame.symbol_samples();
    const double scale = std::sqrt(static_cast<double>(N));
    arma::cx_vec out(frame.slot_samples());
    arma::cx_vec F(N);
    for (std::size_t l = 0; l < frame.n_symbols; ++l)
    {
        F.zeros();
        for (std::size_t k = 0; k < frame.n_subcarriers; ++k)
            F[fft_bin(k, frame)] = X(k, l);
        const arma::cx_vec x = arma::ifft(F) * scale;
        out.subvec(l * S, l * S + cp - 1) = x.tail(cp);
        out.subvec(l * S + cp, l * S + S - 1) = x;
    }
    return out;
}
} // namespace

arma::cx_mat transmit_receive_td(const SlotGrid &slot, const ChannelRealization &r, const FrameConfig &frame,
                                 double snr_db, std::uint64_t seed)
{
    frame.validate();
    if (slot.X.n_rows != frame.n_subcarriers || slot.X.n_cols != frame.n_symbols)
        throw std::invalid_argument("transmit_receive_td: grid does not match the frame.");
    if (r.tap_gains.n_cols != frame.n_symbols)
        throw std::invalid_argument("transmit_receive_td: realization does not cover the frame's symbols.");

    const auto d = delay_samples(r, frame);
    const std::size_t max_d = d.empty() ? 0 : *std::max_element(d.begin(), d.end());
    if (max_d > frame.slot_samples())
        throw std::invalid_argument("transmit_receive_td: tap delay exceeds the slot duration.");

    const std::size_t N = frame.fft_size, cp = frame.cp_samples(), S = frame.symbol_samples();
    const std::size_t n_slot = frame.slot_samples();

    // The slot before this one carries random QPSK on every RE.
    arma::cx_mat previous(frame.n_subcarriers, frame.n_symbols);
    {
        std::mt19937_64 rng(mix64(seed ^ stream::previous_slot));
        const double a = 1.0 / std::sqrt(2.0);
        for (auto &x : previous)
        {
            const auto bits = rng();
            x = cx((bits & 1U) ? -a : a, (bits & 2U) ? -a : a);
        }
    }
    const arma::cx_vec prev_tx = modulate(previous, frame);

    arma::cx_vec stream(max_d + n_slot);
    if (max_d > 0)
        stream.head(max_d) = prev_tx.tail(max_d);
    stream.tail(n_slot) = modulate(slot.X, frame);

    // Align each tap's phase with the f_k = k * df reference of freq_response.
    const std::size_t n_taps = d.size();
    arma::cx_mat coeff(n_taps, frame.n_symbols);
    for (std::size_t m = 0; m < n_taps; ++m)
    {
        const double ph = -two_pi * static_cast<double>(frame.n_subcarriers / 2) * static_cast<double>(d[m]) /
                          static_cast<double>(N);
        coeff.row(m) = r.tap_gains.row(m) * cx(std::cos(ph), std::sin(ph));
    }

    arma::cx_vec rx(n_slot, arma::fill::zeros);
    for (std::size_t n = 0; n < n_slot; ++n)
    {
        const std::size_t l = n / S;
        cx acc = 0.0;
        for (std::size_t m = 0; m < n_taps; ++m)
            acc += coeff(m, l) * stream[max_d + n - d[m]];
        rx[n] = acc;
    }

    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    arma::cx_mat Y(frame.n_subcarriers, frame.n_symbols);
    for (std::size_t l = 0; l < frame.n_symbols; ++l)
    {
        const arma::cx_vec F = arma::fft(arma::cx_vec(rx.subvec(l * S + cp, l * S + cp + N - 1))) * scale;
        for (std::size_t k = 0; k < frame.n_subcarriers; ++k)
            Y(k, l) = F[fft_bin(k, frame)];
    }
    add_noise(Y, snr_db, seed);
    return Y;
}

arma::cx_mat extract_pilots(const arma::cx_mat &Y, const DmrsPattern &pattern, const FrameConfig &frame)
{
    if (Y.n_rows != frame.n_subcarriers || Y.n_cols != frame.n_symbols)
        throw std::invalid_argument("extract_pilots: grid does not match the frame.");
    const auto rows = pattern.pilot_subcarriers(frame);
    arma::cx_mat P(rows.size(), pattern.n_pilot_symbols());
    for (std::size_t c = 0; c < pattern.n_pilot_symbols(); ++c)
        for (std::size_t r = 0; r < rows.size(); ++r)
            P(r, c) = Y(rows[r], pattern.pilot_symbols[c]);
    return P;
}

void write_grid_dump(const std::string &path, const arma::cx_mat &grid, const std::string &name)
{
    static_assert(std::endian::native == std::endian::little, "grid dumps assume a little-endian host");

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("Cannot write grid dump: " + path);

    nlohmann::json header = {{"name", name},
                             {"rows", grid.n_rows},
                             {"cols", grid.n_cols},
                             {"dtype", "complex64"},
                             {"order", "row-major"}};
    out << header.dump() << '\n';

    std::vector<float> buf;
    buf.reserve(2 * grid.n_elem);
    for (arma::uword r = 0; r < grid.n_rows; ++r)
        for (arma::uword c = 0; c < grid.n_cols; ++c)
        {
            buf.push_back(static_cast<float>(grid(r, c).real()));
            buf.push_back(static_cast<float>(grid(r, c).imag()));
        }
    out.write(reinterpret_cast<const char *>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!out)
        throw std::runtime_error("Failed writing grid dump: " + path);
}

arma::cx_mat read_grid_dump(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("Cannot read grid dump: " + path);
    std::string line;
    std::getline(in, line);
    const auto header = nlohmann::json::parse(line);
    if (header.at("dtype") != "complex64" || header.at("order") != "row-major")
        throw std::runtime_error("Unsupported grid dump layout: " + path);

    const auto rows = header.at("rows").get<arma::uword>();
    const auto cols = header.at("cols").get<arma::uword>();
    std::vector<float> buf(2 * rows * cols);
    in.read(reinterpret_cast<char *>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (in.gcount() != static_cast<std::streamsize>(buf.size() * sizeof(float)))
        throw std::runtime_error("Truncated grid dump: " + path);

    arma::cx_mat grid(rows, cols);
    std::size_t i = 0;
    for (arma::uword r = 0; r < rows; ++r)
        for (arma::uword c = 0; c < cols; ++c, i += 2)
            grid(r, c) = cx(buf[i], buf[i + 1]);
    return grid;
}
} // namespace pdpkit
