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

#include "pdpkit/eval_harness.hpp"
#include "pdpkit/estimators.hpp"
#include "pdpkit/tensor_file.hpp"

#include <omp.h>

#include <cmath>
#include <filesystem>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>

namespace pdpkit
{
namespace
{
double draw_doppler(std::uint64_t slot_seed, const Range &r)
{
    if (r.lo == r.hi)
        return r.lo;
    std::mt19937_64 rng(derive_seed(slot_seed, stream::draw));
    return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

PowerDelayProfile effective(const PowerDelayProfile &pdp, bool normalize)
{
    return normalize ? normalize_power(pdp) : pdp;
}

int thread_count(unsigned threads)
{
    return threads == 0 ? omp_get_max_threads() : static_cast<int>(threads);
}

EvalPoint summarize(std::string estimator, std::string channel, double snr_db, std::optional<double> ds_ns,
                    const std::vector<double> &values)
{
    EvalPoint p{std::move(estimator), std::move(channel), snr_db, ds_ns, values.size(), 0.0, 0.0};
    KahanSum sum;
    for (double v : values)
        sum.add(v);
    p.mse = sum.value() / static_cast<double>(values.size());

    if (values.size() > 1)
    {
        KahanSum sq;
        for (double v : values)
            sq.add((v - p.mse) * (v - p.mse));
        const double var = sq.value() / static_cast<double>(values.size() - 1);
        p.stderr_mse = std::sqrt(var / static_cast<double>(values.size()));
    }
    return p;
}

// Runs n slots of one channel and scores them with one estimator.
EvalPoint evaluate_cell(const EstimatorSpec &est, const std::string &estimator_id, const NamedChannel &test,
                        const PowerDelayProfile *stats, double snr_db, std::optional<double> ds_ns,
                        const EvalConfig &cfg, LinkPath link, const std::string &prediction_file)
{
    if (cfg.n == 0)
        throw std::invalid_argument("Evaluation needs at least one realization.");
    cfg.frame.validate();
    cfg.pattern.validate(cfg.frame);

    std::unique_ptr<MmseFilter> filter;
    if (est.kind == EstimatorSpec::Kind::mmse_matched || est.kind == EstimatorSpec::Kind::mmse_stats)
    {
        const PowerDelayProfile &src = (est.kind == EstimatorSpec::Kind::mmse_matched) ? test.pdp : *stats;
        const auto corr = analytic_correlations(effective(src, cfg.normalize_power), cfg.pattern, cfg.frame);
        filter = std::make_unique<MmseFilter>(corr, snr_db, cfg.pattern.pilot_value);
    }

    std::vector<arma::cx_mat> predictions;
    if (est.kind == EstimatorSpec::Kind::external)
    {
        if (!std::filesystem::exists(prediction_file))
            throw std::runtime_error("Missing prediction file: " + prediction_file);
        predictions = read_predictions(prediction_file);
        if (predictions.size() < cfg.n)
            throw std::runtime_error("Prediction file " + prediction_file + " holds " +
                                     std::to_string(predictions.size()) + " estimates, " + std::to_string(cfg.n) +
                                     " needed.");
        for (const auto &p : predictions)
            if (p.n_rows != cfg.frame.n_subcarriers || p.n_cols != cfg.frame.n_symbols)
                throw std::runtime_error("Prediction shape mismatch in " + prediction_file);
    }

    std::vector<double> values(cfg.n);
#pragma omp parallel for num_threads(thread_count(cfg.threads)) schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(cfg.n); ++ii)
    {
        const auto i = static_cast<std::size_t>(ii);
        const std::uint64_t slot_seed = eval_slot_seed(cfg.base_seed, test.name, i);
        const ChannelSpec spec{test.pdp, draw_doppler(slot_seed, cfg.doppler_hz), cfg.normalize_power};
        const SlotOutcome slot = simulate_slot(spec, cfg.pattern, cfg.frame, snr_db, slot_seed, link);

        ChannelMatrix estimate;
        switch (est.kind)
        {
        case EstimatorSpec::Kind::ls:
            estimate = bilinear_to_slot(slot.ls.values, cfg.pattern, cfg.frame);
            break;
        case EstimatorSpec::Kind::mmse_matched:
        case EstimatorSpec::Kind::mmse_stats:
            estimate = bilinear_to_slot(filter->apply(slot.ls), cfg.pattern, cfg.frame);
            break;
        case EstimatorSpec::Kind::external:
            estimate = predictions[i];
            break;
        }
        values[i] = mse(estimate, slot.H);
    }
    return summarize(estimator_id, test.name, snr_db, ds_ns, values);
}

std::string format_number(double v)
{
    std::ostringstream s;
    s << v;
    return s.str();
}
} // namespace

EstimatorSpec EstimatorSpec::parse(const std::string &text)
{
    std::string t;
    for (char c : text)
        t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));

    if (t == "ls")
        return {Kind::ls, {}};
    if (t == "mmse")
        return {Kind::mmse_matched, {}};
    if (t == "external")
        return {Kind::external, {}};
    if (t.starts_with("mmse:") && text.size() > 5)
        return {Kind::mmse_stats, text.substr(5)};
    throw std::invalid_argument("Unknown estimator '" + text + "'. Use ls, mmse, mmse:<channel> or external.");
}

std::string EstimatorSpec::id() const
{
    switch (kind)
    {
    case Kind::ls:
        return "LS";
    case Kind::mmse_matched:
        return "MMSE";
    case Kind::mmse_stats:
        return "MMSE[stats=" + stats_selector + "]";
    case Kind::external:
        return "external";
    }
    return "unknown";
}

std::uint64_t eval_slot_seed(std::uint64_t base_seed, const std::string &channel, std::size_t i)
{
    return derive_seed(derive_seed(base_seed, name_hash(channel)), i);
}

std::string prediction_file_name(const std::string &channel, double snr_db)
{
    return channel + "_snr" + format_number(snr_db) + ".bin";
}

std::vector<EvalPoint> mse_vs_snr(const EstimatorSpec &estimator, std::span<const NamedChannel> channels,
                                  std::span<const double> snr_grid, const EvalConfig &config)
{
    std::unique_ptr<PowerDelayProfile> stats;
    if (estimator.kind == EstimatorSpec::Kind::mmse_stats)
        stats = std::make_unique<PowerDelayProfile>(resolve_channel(estimator.stats_selector));

    std::vector<EvalPoint> table;
    for (const auto &ch : channels)
        for (double snr : snr_grid)
        {
            const auto file = (std::filesystem::path(config.predictions_dir) / prediction_file_name(ch.name, snr)).string();
            table.push_back(evaluate_cell(estimator, estimator.id(), ch, stats.get(), snr, std::nullopt, config,
                                          LinkPath::frequency_domain, file));
        }
    return table;
}

std::vector<EvalPoint> GeneralizationGrid::flatten() const
{
    std::vector<EvalPoint> out;
    for (const auto &row : cells)
        out.insert(out.end(), row.begin(), row.end());
    return out;
}

GeneralizationGrid generalization_grid(EstimatorSpec::Kind family, std::span<const NamedChannel> train,
                                       std::span<const NamedChannel> test, double snr_db, const EvalConfig &config)
{
    if (family != EstimatorSpec::Kind::mmse_stats && family != EstimatorSpec::Kind::external)
        throw std::invalid_argument("generalization_grid: family must be MMSE statistics or external predictions.");

    GeneralizationGrid grid;
    for (const auto &t : train)
        grid.train.push_back(t.name);
    for (const auto &t : test)
        grid.test.push_back(t.name);

    for (const auto &tr : train)
    {
        std::vector<EvalPoint> row;
        const EstimatorSpec est{family, tr.name};
        const std::string id = family == EstimatorSpec::Kind::external ? "external[train=" + tr.name + "]" : est.id();
        for (const auto &te : test)
        {
            const auto file = (std::filesystem::path(config.predictions_dir) / tr.name / (te.name + ".bin")).string();
            row.push_back(evaluate_cell(est, id, te, &tr.pdp, snr_db, std::nullopt, config,
                                        LinkPath::frequency_domain, file));
        }
        grid.cells.push_back(std::move(row));
    }
    return grid;
}

std::vector<EvalPoint> ds_sweep(const EstimatorSpec &estimator, std::span<const CdlProfile> profiles,
                                std::span<const double> ds_grid_ns, double snr_db, const EvalConfig &config)
{
    std::unique_ptr<PowerDelayProfile> stats;
    if (estimator.kind == EstimatorSpec::Kind::mmse_stats)
        stats = std::make_unique<PowerDelayProfile>(resolve_channel(estimator.stats_selector));

    const double slot_ns = static_cast<double>(config.frame.slot_samples()) / config.frame.sample_rate_hz() * 1e9;
    std::vector<EvalPoint> table;
    for (const auto &profile : profiles)
        for (double ds : ds_grid_ns)
        {
            const PowerDelayProfile pdp = scale_cdl(profile, ds);
            if (pdp.max_delay_ns() > slot_ns)
                throw std::invalid_argument("ds_sweep: delay spread " + format_number(ds) + " ns puts a " +
                                            profile.name + " cluster beyond the slot duration.");
            const NamedChannel ch{pdp.name(), pdp};
            const auto file = (std::filesystem::path(config.predictions_dir) / prediction_file_name(ch.name, snr_db)).string();
            auto point = evaluate_cell(estimator, estimator.id(), ch, stats.get(), snr_db, ds, config,
                                       LinkPath::time_domain, file);
            point.channel = profile.name;
            table.push_back(std::move(point));
        }
    return table;
}

void export_eval_set(const NamedChannel &channel, double snr_db, const EvalConfig &config, const std::string &path,
                     LinkPath path_kind)
{
    config.frame.validate();
    config.pattern.validate(config.frame);
    const TensorShape shape{static_cast<std::uint32_t>(config.frame.n_subcarriers),
                            static_cast<std::uint32_t>(config.frame.n_symbols),
                            static_cast<std::uint32_t>(config.pattern.n_pilot_subcarriers(config.frame)),
                            static_cast<std::uint32_t>(config.pattern.n_pilot_symbols())};
    TensorWriter w(path, RecordKind::sample, shape);
    for (std::size_t i = 0; i < config.n; ++i)
    {
        const std::uint64_t slot_seed = eval_slot_seed(config.base_seed, channel.name, i);
        const double doppler = draw_doppler(slot_seed, config.doppler_hz);
        const ChannelSpec spec{channel.pdp, doppler, config.normalize_power};
        const SlotOutcome slot = simulate_slot(spec, config.pattern, config.frame, snr_db, slot_seed, path_kind);
        w.write(Sample{to_planes(slot.ls.values), to_planes(slot.H), static_cast<float>(snr_db),
                       static_cast<float>(doppler)});
    }
    w.close();
}
} // namespace pdpkit
