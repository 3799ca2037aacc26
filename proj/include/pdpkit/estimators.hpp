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

#ifndef PDPKIT_ESTIMATORS_HPP
#define PDPKIT_ESTIMATORS_HPP

#include "pdpkit/channel_models.hpp"
#include "pdpkit/fading.hpp"
#include "pdpkit/frame.hpp"

#include <armadillo>
#include <span>
#include <vector>

namespace pdpkit
{
/// Channel estimate at the pilot REs, [n_pilot_subcarriers, n_pilot_symbols].
struct PilotEstimate
{
    arma::cx_mat values;
    DmrsPattern pattern;
};

/// Correlation matrices used by the MMSE filter, one pair per pilot symbol.
/// r_h_hp[u] = E{H(u) Hp(u)^H} is [n_subcarriers, n_pilot_subcarriers],
/// r_hp_hp[u] = E{Hp(u) Hp(u)^H} is [n_pilot_subcarriers, n_pilot_subcarriers].
struct CorrelationSet
{
    std::vector<arma::cx_mat> r_h_hp;
    std::vector<arma::cx_mat> r_hp_hp;
};

/// Element-wise division of the received pilots by the pilot value.
PilotEstimate ls_estimate(const arma::cx_mat &y_pilot, const DmrsPattern &pattern);

/// WSSUS frequency correlation: R(i, j) = sum_m P_m exp(-j 2 pi df (rows[i] - cols[j]) tau_m).
arma::cx_mat frequency_correlation(const PowerDelayProfile &pdp, std::span<const std::size_t> rows,
                                   std::span<const std::size_t> cols, double subcarrier_spacing_hz);

CorrelationSet analytic_correlations(const PowerDelayProfile &pdp, const DmrsPattern &pattern,
                                     const FrameConfig &frame);

/// Precomputed MMSE weights W(u) = R_HHp(u) (R_HpHp(u) + sigma_N^2 / sigma_X^2 I)^-1.
///
/// sigma_X^2 is the pilot power |pilot_value|^2, so the loading term equals the noise
/// variance of the LS estimate. If the loaded matrix is numerically singular (noise off on
/// a low-rank channel) a Tikhonov floor of 1e-10 * trace / n is added before solving.
class MmseFilter
{
public:
    MmseFilter(const CorrelationSet &corr, double snr_db, cx pilot_value);

    /// Full-band estimates at the pilot symbols, [n_subcarriers, n_pilot_symbols].
    arma::cx_mat apply(const PilotEstimate &ls) const;

    const arma::cx_mat &weights(std::size_t u) const { return weights_.at(u); }
    bool floor_applied() const { return floor_applied_; }

private:
    std::vector<arma::cx_mat> weights_;
    bool floor_applied_ = false;
};

arma::cx_mat mmse_estimate(const PilotEstimate &ls, const CorrelationSet &corr, double snr_db);

/// Bilinear interpolation from a sparse grid to the whole slot. values(i, j) sits at
/// subcarrier rows[i] and symbol cols[j]. Linear between known rows/columns, held
/// constant beyond the outermost ones.
ChannelMatrix bilinear_to_slot(const arma::cx_mat &values, std::span<const std::size_t> rows,
                               std::span<const std::size_t> cols, const FrameConfig &frame);

/// Pilot-grid overload: rows are the pilot subcarriers when values has one row per pilot
/// subcarrier, or every subcarrier when it has n_subcarriers rows (MMSE output).
ChannelMatrix bilinear_to_slot(const arma::cx_mat &values, const DmrsPattern &pattern, const FrameConfig &frame);

/// (1 / (N_f N_s)) sum |H_hat - H|^2
double mse(const ChannelMatrix &h_hat, const ChannelMatrix &h);

// Whole-slot estimates from a received grid.
ChannelMatrix ls_slot_estimate(const arma::cx_mat &Y, const DmrsPattern &pattern, const FrameConfig &frame);
ChannelMatrix mmse_slot_estimate(const arma::cx_mat &Y, const MmseFilter &filter, const DmrsPattern &pattern,
                                 const FrameConfig &frame);
} // namespace pdpkit

#endif
