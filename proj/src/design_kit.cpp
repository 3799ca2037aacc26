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

#include "pdpkit/design_kit.hpp"
#include "pdpkit/estimators.hpp"
#include "pdpkit/fading.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pdpkit
{
namespace
{
// Round-off allowance for envelope comparisons, in dB.
constexpr double envelope_eps_db = 1e-9;
// Breakpoints closer than this are merged, in ns.
constexpr double merge_eps_ns = 1e-9;
} // namespace

PdpEnvelope::PdpEnvelope(const PowerDelayProfile &pdp, EnvelopeScale scale) : anchors_(pdp.taps()), scale_(scale)
{
}

double PdpEnvelope::operator()(double tau_ns) const
{
    if (!contains(tau_ns))
        throw std::out_of_range("Envelope evaluated outside its delay range.");

    auto hi = std::lower_bound(anchors_.begin(), anchors_.end(), tau_ns,
                               [](const Tap &t, double v) { return t.delay_ns < v; });
    if (hi->delay_ns == tau_ns)
        return hi->gain_db;
    auto lo = hi - 1;

    const double w = (tau_ns - lo->delay_ns) / (hi->delay_ns - lo->delay_ns);
    if (scale_ == EnvelopeScale::db)
        return lo->gain_db + w * (hi->gain_db - lo->gain_db);
    return linear_to_db((1.0 - w) * db_to_linear(lo->gain_db) + w * db_to_linear(hi->gain_db));
}

const char *to_string(ViolationKind kind)
{
    switch (kind)
    {
    case ViolationKind::envelope:
        return "envelope";
    case ViolationKind::max_delay:
        return "max_delay";
    case ViolationKind::tap_count:
        return "tap_count";
    }
    return "unknown";
}

std::string ApplicabilityReport::to_json(const std::string &candidate, const std::string &designed,
                                         double tol_db) const
{
    nlohmann::json j;
    j["candidate"] = candidate;
    j["designed"] = designed;
    j["tol_db"] = tol_db;
    j["applicable"] = applicable;
    j["violations"] = nlohmann::json::array();
    for (const auto &v : violations)
    {
        nlohmann::json e{{"kind", to_string(v.kind)}, {"delay_ns", v.delay_ns}};
        // An infinite margin marks delays where the designed envelope is undefined.
        e["margin"] = std::isfinite(v.margin) ? nlohmann::json(v.margin) : nlohmann::json(nullptr);
        j["violations"].push_back(e);
    }
    return j.dump(2);
}

ApplicabilityReport is_applicable(const PowerDelayProfile &candidate, const PowerDelayProfile &designed,
                                  double tol_db, EnvelopeScale scale)
{
    if (!(tol_db >= 0.0))
        throw std::invalid_argument("is_applicable: tolerance must be non-negative.");

    const PdpEnvelope cand(candidate, scale);
    const PdpEnvelope des(designed, scale);

    // Evaluation points: both anchor sets inside the candidate range plus a 1 ns grid.
    std::vector<double> points;
    for (const auto &t : candidate.taps())
        points.push_back(t.delay_ns);
    for (const auto &t : designed.taps())
        if (cand.contains(t.delay_ns))
            points.push_back(t.delay_ns);
    const double begin = cand.domain_begin(), end = cand.domain_end();
    for (double tau = std::ceil(begin); tau < end; tau += 1.0)
        points.push_back(tau);
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    ApplicabilityReport report;
    bool in_run = false;
    Violation worst{ViolationKind::envelope, 0.0, 0.0};
    for (double tau : points)
    {
        const double margin = des.contains(tau) ? cand(tau) - des(tau) - tol_db
                                                : std::numeric_limits<double>::infinity();
        if (margin > envelope_eps_db)
        {
            if (!in_run || margin > worst.margin)
                worst = {ViolationKind::envelope, tau, margin};
            in_run = true;
        }
        else if (in_run)
        {
            report.violations.push_back(worst);
            in_run = false;
        }
    }
    if (in_run)
        report.violations.push_back(worst);

    if (candidate.max_delay_ns() > designed.max_delay_ns())
        report.violations.push_back({ViolationKind::max_delay, candidate.max_delay_ns(),
                                     candidate.max_delay_ns() - designed.max_delay_ns()});

    if (candidate.size() > designed.size())
        report.violations.push_back({ViolationKind::tap_count, candidate.max_delay_ns(),
                                     static_cast<double>(candidate.size() - designed.size())});

    report.applicable = report.violations.empty();
    return report;
}

std::vector<std::vector<bool>> applicability_matrix(std::span<const PowerDelayProfile> profiles, double tol_db)
{
    std::vector<std::vector<bool>> m(profiles.size(), std::vector<bool>(profiles.size()));
    for (std::size_t i = 0; i < profiles.size(); ++i)
        for (std::size_t j = 0; j < profiles.size(); ++j)
            m[i][j] = is_applicable(profiles[j], profiles[i], tol_db).applicable;
    return m;
}

arma::cx_mat autocorrelation_matrix(const PowerDelayProfile &pdp, const FrameConfig &frame,
                                    const CorrelationMode &mode)
{
    if (std::holds_alternative<AnalyticCorrelation>(mode))
    {
        std::vector<std::size_t> k(frame.n_subcarriers);
        std::iota(k.begin(), k.end(), 0);
        return frequency_correlation(pdp, k, k, frame.subcarrier_spacing_hz);
    }

    const auto &emp = std::get<EmpiricalCorrelation>(mode);
    if (emp.realizations == 0)
        throw std::invalid_argument("autocorrelation_matrix: empirical mode needs at least one realization.");

    FrameConfig one = frame;
    one.n_symbols = 1;
    const ChannelSpec spec{pdp, 0.0, false};
    const double t0[] = {0.0};

    arma::cx_mat R(frame.n_subcarriers, frame.n_subcarriers, arma::fill::zeros);
    for (std::size_t i = 0; i < emp.realizations; ++i)
    {
        const auto r = generate_realization(spec, derive_seed(emp.seed, i), t0);
        const arma::cx_vec h = freq_response(r, one).col(0);
        R += h * h.t();
    }
    return R / static_cast<double>(emp.realizations);
}

double EigenSpectrum::trace() const
{
    KahanSum s;
    for (double v : eigenvalues)
        s.add(v);
    return s.value();
}

EigenSpectrum eigen_spectrum(const arma::cx_mat &R)
{
    if (R.n_rows != R.n_cols || R.n_rows == 0)
        throw std::invalid_argument("eigen_spectrum: matrix must be square and non-empty.");

    const double norm_r = arma::norm(R, "fro");
    if (arma::norm(R - R.t(), "fro") > 1e-9 * std::max(norm_r, 1e-300))
        throw std::invalid_argument("eigen_spectrum: matrix is not Hermitian.");

    arma::vec lambda;
    arma::cx_mat U;
    if (!arma::eig_sym(lambda, U, R))
        throw std::runtime_error("eigen_spectrum: eigendecomposition did not converge.");

    const arma::cx_mat rebuilt = U * arma::diagmat(arma::conv_to<arma::cx_vec>::from(lambda)) * U.t();
    if (norm_r > 0.0 && arma::norm(R - rebuilt, "fro") / norm_r >= 1e-8)
        throw std::runtime_error("eigen_spectrum: reconstruction residual too large.");

    EigenSpectrum s;
    s.dimension = R.n_rows;
    s.eigenvalues.assign(lambda.begin(), lambda.end());
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), std::greater<>());
    return s;
}

EigenComparison eigen_compare(const EigenSpectrum &designed, const EigenSpectrum &candidate, std::size_t count,
                              double threshold_frac)
{
    if (count > designed.eigenvalues.size() || count > candidate.eigenvalues.size())
        throw std::invalid_argument("eigen_compare: count exceeds the spectrum length.");

    EigenComparison c;
    for (std::size_t i = 0; i < count; ++i)
    {
        const bool ok = designed.eigenvalues[i] >= candidate.eigenvalues[i];
        c.elementwise.push_back(ok);
        c.elementwise_all = c.elementwise_all && ok;
    }

    auto rank = [threshold_frac](const EigenSpectrum &s)
    {
        const double t = threshold_frac * s.trace();
        return static_cast<std::size_t>(
            std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(), [t](double v) { return v > t; }));
    };
    c.rank_designed = rank(designed);
    c.rank_candidate = rank(candidate);
    c.rank_dominates = c.rank_designed >= c.rank_candidate;
    return c;
}

PowerDelayProfile suggest_envelope(std::span<const PowerDelayProfile> applicables, double margin_db,
                                   double extra_delay_ns)
{
    if (applicables.empty())
        throw std::invalid_argument("suggest_envelope: need at least one input profile.");
    if (!(margin_db >= 0.0) || !(extra_delay_ns >= 0.0))
        throw std::invalid_argument("suggest_envelope: margin and extra delay must be non-negative.");

    std::vector<PdpEnvelope> env;
    std::size_t max_taps = 0;
    std::vector<double> breaks;
    for (const auto &p : applicables)
    {
        env.emplace_back(p);
        max_taps = std::max(max_taps, p.size());
        for (const auto &t : p.taps())
            breaks.push_back(t.delay_ns);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    // Crossings between pairs of envelopes, so the maximum is represented exactly.
    std::vector<double> crossings;
    for (std::size_t i = 0; i < env.size(); ++i)
        for (std::size_t j = i + 1; j < env.size(); ++j)
            for (std::size_t b = 1; b < breaks.size(); ++b)
            {
                const double a = breaks[b - 1], c = breaks[b];
                if (!env[i].contains(a) || !env[i].contains(c) || !env[j].contains(a) || !env[j].contains(c))
                    continue;
                const double da = env[i](a) - env[j](a);
                const double dc = env[i](c) - env[j](c);
                if ((da < 0.0 && dc > 0.0) || (da > 0.0 && dc < 0.0))
                    crossings.push_back(a + (c - a) * da / (da - dc));
            }
    breaks.insert(breaks.end(), crossings.begin(), crossings.end());
    std::sort(breaks.begin(), breaks.end());

    std::vector<Tap> taps;
    for (double tau : breaks)
    {
        if (!taps.empty() && tau - taps.back().delay_ns <= merge_eps_ns)
            continue;
        double best = -std::numeric_limits<double>::infinity();
        for (const auto &e : env)
            if (e.contains(tau))
                best = std::max(best, e(tau));
        taps.push_back({tau, best + margin_db});
    }

    if (extra_delay_ns > 0.0)
        taps.push_back({taps.back().delay_ns + extra_delay_ns, taps.back().gain_db});

    // Pad with collinear points on the longest segments until the tap count is reached.
    while (taps.size() < max_taps)
    {
        std::size_t longest = 1;
        for (std::size_t i = 2; i < taps.size(); ++i)
            if (taps[i].delay_ns - taps[i - 1].delay_ns > taps[longest].delay_ns - taps[longest - 1].delay_ns)
                longest = i;
        const Tap &a = taps[longest - 1], &b = taps[longest];
        const Tap mid{0.5 * (a.delay_ns + b.delay_ns), 0.5 * (a.gain_db + b.gain_db)};
        taps.insert(taps.begin() + static_cast<std::ptrdiff_t>(longest), mid);
    }

    return PowerDelayProfile(std::move(taps), "suggested");
}
} // namespace pdpkit
