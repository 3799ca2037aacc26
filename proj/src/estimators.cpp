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

#include "pdpkit/estimators.hpp"
#include "pdpkit/ofdm_link.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace pdpkit
{
PilotEstimate ls_estimate(const arma::cx_mat &y_pilot, const DmrsPattern &pattern)
{
    return {y_pilot / pattern.pilot_value, pattern};
}

arma::cx_mat frequency_correlation(const PowerDelayProfile &pdp, std::span<const std::size_t> rows,
                                   std::span<const std::size_t> cols, double subcarrier_spacing_hz)
{
    const arma::vec power = pdp.linear_powers();
    const arma::vec tau = pdp.delays_s();

    arma::cx_mat R(rows.size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < rows.size(); ++i)
        {
            const double dk = static_cast<double>(rows[i]) - static_cast<double>(cols[j]);
            cx acc = 0.0;
            for (arma::uword m = 0; m < tau.n_elem; ++m)
                acc += power[m] * std::polar(1.0, -two_pi * subcarrier_spacing_hz * dk * tau[m]);
            R(i, j) = acc;
        }
    return R;
}

CorrelationSet analytic_correlations(const PowerDelayProfile &pdp, const DmrsPattern &pattern,
                                     const FrameConfig &frame)
{
    pattern.validate(frame);
    std::vector<std::size_t> all(frame.n_subcarriers);
    std::iota(all.begin(), all.end(), 0);
    const auto pilots = pattern.pilot_subcarriers(frame);

    const arma::cx_mat r_h_hp = frequency_correlation(pdp, all, pilots, frame.subcarrier_spacing_hz);
    const arma::cx_mat r_hp_hp = frequency_correlation(pdp, pilots, pilots, frame.subcarrier_spacing_hz);

    // Same comb on every pilot symbol, and the channel is stationary.
    CorrelationSet set;
    set.r_h_hp.assign(pattern.n_pilot_symbols(), r_h_hp);
    set.r_hp_hp.assign(pattern.n_pilot_symbols(), r_hp_hp);
    return set;
}

MmseFilter::MmseFilter(const CorrelationSet &corr, double snr_db, cx pilot_value)
{
    if (std::isnan(snr_db))
        throw std::invalid_argument("MMSE filter: SNR is NaN.");
    if (corr.r_h_hp.size() != corr.r_hp_hp.size())
        throw std::invalid_argument("MMSE filter: correlation set is inconsistent.");

    const double ratio = std::pow(10.0, -snr_db / 10.0) / std::norm(pilot_value);

    for (std::size_t u = 0; u < corr.r_h_hp.size(); ++u)
    {
        const arma::cx_mat &rhp = corr.r_h_hp[u];
        const arma::cx_mat &rpp = corr.r_hp_hp[u];
        if (rpp.n_rows != rpp.n_cols || rhp.n_cols != rpp.n_rows)
            throw std::invalid_argument("MMSE filter: correlation matrix dimensions do not match.");

        if (std::isinf(ratio))
        {
            weights_.emplace_back(rhp.n_rows, rhp.n_cols, arma::fill::zeros);
            continue;
        }

        const std::size_t n = rpp.n_rows;
        arma::cx_mat A = rpp + ratio * arma::eye<arma::cx_mat>(n, n);
        if (arma::rcond(A) < 1e-12)
        {
            const double floor = 1e-10 * std::real(arma::trace(rpp)) / static_cast<double>(n);
            A += floor * arma::eye<arma::cx_mat>(n, n);
            floor_applied_ = true;
        }

        // W = R_HHp A^-1, solved as A W^H = R_HHp^H (A is Hermitian).
        arma::cx_mat wh;
        if (!arma::solve(wh, A, arma::cx_mat(rhp.t()), arma::solve_opts::no_approx))
        {
            std::ostringstream msg;
            msg << "MMSE filter: linear solve failed (condition number " << arma::cond(A) << ").";
            throw std::runtime_error(msg.str());
        }
        weights_.push_back(wh.t());
    }
}

arma::cx_mat MmseFilter::apply(const PilotEstimate &ls) const
{
    if (ls.values.n_cols != weights_.size())
        throw std::invalid_argument("MMSE filter: pilot symbol count does not match.");

    arma::cx_mat out(weights_.empty() ? 0 : weights_.front().n_rows, weights_.size());
    for (std::size_t u = 0; u < weights_.size(); ++u)
    {
        if (ls.values.n_rows != weights_[u].n_cols)
            throw std::invalid_argument("MMSE filter: pilot subcarrier count does not match.");
        out.col(u) = weights_[u] * ls.values.col(u);
    }
    return out;
}

arma::cx_mat mmse_estimate(const PilotEstimate &ls, const CorrelationSet &corr, double snr_db)
{
    return MmseFilter(corr, snr_db, ls.pattern.pilot_value).apply(ls);
}

namespace
{
// For each output index, the bracketing known positions and the weight of the upper one.
struct Bracket
{
    std::size_t lo, hi;
    double w;
};

std::vector<Bracket> brackets(std::span<const std::size_t> known, std::size_t n_out)
{
    std::vector<Bracket> out(n_out);
    const std::size_t last = known.size() - 1;
    for (std::size_t x = 0; x < n_out; ++x)
    {
        if (x <= known.front())
            out[x] = {0, 0, 0.0};
        else if (x >= known.back())
            out[x] = {last, last, 0.0};
        else
        {
            std::size_t i = 0;
            while (known[i + 1] < x)
                ++i;
            const double span = static_cast<double>(known[i + 1] - known[i]);
            out[x] = {i, i + 1, static_cast<double>(x - known[i]) / span};
        }
    }
    return out;
}
} // namespace

ChannelMatrix bilinear_to_slot(const arma::cx_mat &values, std::span<const std::size_t> rows,
                               std::span<const std::size_t> cols, const FrameConfig &frame)
{
    if (rows.empty() || cols.empty())
        throw std::invalid_argument("bilinear_to_slot: need at least one known row and column.");
    if (values.n_rows != rows.size() || values.n_cols != cols.size())
        throw std::invalid_argument("bilinear_to_slot: values do not match the position lists.");
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i] <= rows[i - 1])
            throw std::invalid_argument("bilinear_to_slot: row positions must increase.");
    for (std::size_t j = 1; j < cols.size(); ++j)
        if (cols[j] <= cols[j - 1])
            throw std::invalid_argument("bilinear_to_slot: column positions must increase.");

    const auto fb = brackets(rows, frame.n_subcarriers);
    const auto tb = brackets(cols, frame.n_symbols);

    // Frequency first, then time; both steps are linear so the order does not matter.
    arma::cx_mat freq(frame.n_subcarriers, cols.size());
    for (std::size_t k = 0; k < frame.n_subcarriers; ++k)
        freq.row(k) = (1.0 - fb[k].w) * values.row(fb[k].lo) + fb[k].w * values.row(fb[k].hi);

    ChannelMatrix out(frame.n_subcarriers, frame.n_symbols);
    for (std::size_t l = 0; l < frame.n_symbols; ++l)
        out.col(l) = (1.0 - tb[l].w) * freq.col(tb[l].lo) + tb[l].w * freq.col(tb[l].hi);
    return out;
}

ChannelMatrix bilinear_to_slot(const arma::cx_mat &values, const DmrsPattern &pattern, const FrameConfig &frame)
{
    std::vector<std::size_t> rows;
    if (values.n_rows == frame.n_subcarriers)
    {
        rows.resize(frame.n_subcarriers);
        std::iota(rows.begin(), rows.end(), 0);
    }
    else
        rows = pattern.pilot_subcarriers(frame);
    return bilinear_to_slot(values, rows, pattern.pilot_symbols, frame);
}

double mse(const ChannelMatrix &h_hat, const ChannelMatrix &h)
{
    if (h_hat.n_rows != h.n_rows || h_hat.n_cols != h.n_cols)
        throw std::invalid_argument("mse: dimension mismatch.");
    if (h.n_elem == 0)
        throw std::invalid_argument("mse: empty matrices.");
    return arma::accu(arma::square(arma::abs(h_hat - h))) / static_cast<double>(h.n_elem);
}

ChannelMatrix ls_slot_estimate(const arma::cx_mat &Y, const DmrsPattern &pattern, const FrameConfig &frame)
{
    const auto ls = ls_estimate(extract_pilots(Y, pattern, frame), pattern);
    return bilinear_to_slot(ls.values, pattern, frame);
}

ChannelMatrix mmse_slot_estimate(const arma::cx_mat &Y, const MmseFilter &filter, const DmrsPattern &pattern,
                                 const FrameConfig &frame)
{
    const auto ls = ls_estimate(extract_pilots(Y, pattern, frame), pattern);
    return bilinear_to_slot(filter.apply(ls), pattern, frame);
}
} // namespace pdpkit
