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

#ifndef PDPKIT_DESIGN_KIT_HPP
#define PDPKIT_DESIGN_KIT_HPP

#include "pdpkit/channel_models.hpp"
#include "pdpkit/frame.hpp"

#include <armadillo>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace pdpkit
{
enum class EnvelopeScale
{
    db,    // interpolate gains linearly in dB
    linear // interpolate linear powers (sensitivity analysis)
};

/// Continuous PDP envelope: piecewise-linear interpolation between adjacent taps.
/// Defined on [first delay, last delay] only; evaluating outside throws std::out_of_range.
class PdpEnvelope
{
public:
    explicit PdpEnvelope(const PowerDelayProfile &pdp, EnvelopeScale scale = EnvelopeScale::db);

    /// Envelope value in dB at tau_ns.
    double operator()(double tau_ns) const;

    double domain_begin() const { return anchors_.front().delay_ns; }
    double domain_end() const { return anchors_.back().delay_ns; }
    bool contains(double tau_ns) const { return tau_ns >= domain_begin() && tau_ns <= domain_end(); }

    const std::vector<Tap> &anchors() const { return anchors_; }
    EnvelopeScale scale() const { return scale_; }

private:
    std::vector<Tap> anchors_;
    EnvelopeScale scale_;
};

enum class ViolationKind
{
    envelope,
    max_delay,
    tap_count
};

const char *to_string(ViolationKind kind);

struct Violation
{
    ViolationKind kind;
    double delay_ns; // where the worst margin occurs (envelope), the candidate's last delay (max_delay)
    double margin;   // dB above designed + tol (envelope; +inf where the designed envelope is undefined),
                     // excess delay in ns (max_delay), excess tap count (tap_count)
};

struct ApplicabilityReport
{
    bool applicable = true;
    std::vector<Violation> violations;

    std::string to_json(const std::string &candidate, const std::string &designed, double tol_db) const;
};

/// Checks whether a candidate channel lies under a designed channel:
///   envelope:  Theta_candidate(tau) <= Theta_designed(tau) + tol_db on the candidate's delay range
///   max_delay: last candidate delay <= last designed delay
///   tap_count: candidate taps <= designed taps
/// The envelope test evaluates every anchor of both profiles plus a 1 ns grid. One entry is
/// reported per contiguous violating stretch, carrying its worst margin.
ApplicabilityReport is_applicable(const PowerDelayProfile &candidate, const PowerDelayProfile &designed,
                                  double tol_db, EnvelopeScale scale = EnvelopeScale::db);

/// applicability_matrix(p)[i][j] == is_applicable(p[j], p[i], tol).applicable, i.e. row i
/// is the designed (training) channel and column j the candidate (test) channel.
std::vector<std::vector<bool>> applicability_matrix(std::span<const PowerDelayProfile> profiles, double tol_db);

struct AnalyticCorrelation
{
};
struct EmpiricalCorrelation
{
    std::size_t realizations;
    std::uint64_t seed;
};
using CorrelationMode = std::variant<AnalyticCorrelation, EmpiricalCorrelation>;

/// Frequency auto-correlation R_HH = E{H H^H} over all subcarriers, [N_f, N_f].
/// Empirical mode averages H(:, 0) H(:, 0)^H over independent realizations.
arma::cx_mat autocorrelation_matrix(const PowerDelayProfile &pdp, const FrameConfig &frame,
                                    const CorrelationMode &mode = AnalyticCorrelation{});

struct EigenSpectrum
{
    std::vector<double> eigenvalues; // descending
    std::size_t dimension = 0;

    double trace() const;
};

/// Eigenvalues of a Hermitian matrix, descending. Throws std::invalid_argument for a
/// non-Hermitian input and std::runtime_error if the decomposition does not converge or
/// fails to reconstruct the input.
EigenSpectrum eigen_spectrum(const arma::cx_mat &R);

struct EigenComparison
{
    std::vector<bool> elementwise; // designed[i] >= candidate[i], i < count
    bool elementwise_all = true;
    std::size_t rank_designed = 0; // eigenvalues above threshold_frac * trace
    std::size_t rank_candidate = 0;
    bool rank_dominates = false;
};

EigenComparison eigen_compare(const EigenSpectrum &designed, const EigenSpectrum &candidate, std::size_t count,
                              double threshold_frac);

/// Builds a PDP lying on or above every input envelope: the pointwise dB maximum of the
/// inputs plus margin_db, extended flat by extra_delay_ns past the longest input, with at
/// least as many taps as the largest input.
PowerDelayProfile suggest_envelope(std::span<const PowerDelayProfile> applicables, double margin_db,
                                   double extra_delay_ns);
} // namespace pdpkit

#endif
