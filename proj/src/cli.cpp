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

#include "pdpkit/cli.hpp"
#include "pdpkit/channel_models.hpp"
#include "pdpkit/dataset.hpp"
#include "pdpkit/design_kit.hpp"
#include "pdpkit/estimators.hpp"
#include "pdpkit/eval_harness.hpp"
#include "pdpkit/ofdm_link.hpp"
#include "pdpkit/report.hpp"
#include "pdpkit/slot_sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;
using nlohmann::json;

namespace pdpkit::cli
{
namespace
{
// Bad user input detected after CLI11 parsing (unknown channel, malformed list, ...).
struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string &text, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(text);
    while (std::getline(is, cur, sep))
        if (!cur.empty())
            out.push_back(cur);
    return out;
}

double to_number(const std::string &s)
{
    try
    {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos == s.size())
            return v;
    }
    catch (const std::exception &)
    {
    }
    throw UsageError("Not a number: '" + s + "'");
}

Range parse_range(const std::string &text)
{
    const auto parts = split(text, ':');
    if (parts.size() == 1)
    {
        const double v = to_number(parts[0]);
        return {v, v};
    }
    if (parts.size() != 2)
        throw UsageError("Range must be 'lo:hi' or a single value, got '" + text + "'");
    const Range r{to_number(parts[0]), to_number(parts[1])};
    if (!(r.lo <= r.hi))
        throw UsageError("Range '" + text + "' has lo > hi.");
    return r;
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json number_or_string(double v)
{
    return std::isfinite(v) ? json(v) : json(v > 0 ? "inf" : "-inf");
}

PowerDelayProfile resolve(const std::string &selector)
{
    try
    {
        return resolve_channel(selector);
    }
    catch (const std::invalid_argument &e)
    {
        throw UsageError(e.what());
    }
}

std::vector<NamedChannel> resolve_list(const std::string &text)
{
    std::vector<std::string> names = text == "all" ? test_channel_names() : split(text, ',');
    if (names.empty())
        throw UsageError("Empty channel list.");
    std::vector<NamedChannel> out;
    for (const auto &n : names)
        out.push_back({n, resolve(n)});
    return out;
}

std::string read_text(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
        throw UsageError("Cannot read " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

DmrsPattern resolve_pattern(const std::string &sel)
{
    if (sel == "default")
        return DmrsPattern::default_pattern();
    if (sel == "alt" || sel == "alternative")
        return DmrsPattern::alternative_pattern();
    try
    {
        return pattern_from_json(read_text(sel));
    }
    catch (const UsageError &)
    {
        throw UsageError("Pattern must be default, alt or a JSON file, got '" + sel + "'");
    }
}

// Options shared by most subcommands.
struct Common
{
    std::string out_dir;
    std::string pattern = "default";
    std::string frame_file;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    bool normalize = false;
    bool verbose = false;

    FrameConfig frame;
    DmrsPattern dmrs;

    void add(CLI::App *app, bool with_pattern = true)
    {
        app->add_option("--out", out_dir, "Output directory (default: $PDPKIT_OUT_DIR or .)");
        app->add_option("--seed", seed, "Base seed");
        app->add_option("--threads", threads, "Thread cap, 0 = all cores");
        app->add_option("--frame", frame_file, "Frame configuration JSON");
        app->add_flag("--normalize", normalize, "Normalize PDPs to unit total power");
        app->add_flag("-v,--verbose", verbose, "Log progress to stderr");
        if (with_pattern)
            app->add_option("--pattern", pattern, "DM-RS pattern: default, alt or a JSON file");
    }

    void resolve_all()
    {
        if (out_dir.empty())
        {
            const char *env = std::getenv(out_dir_env);
            out_dir = (env && *env) ? env : ".";
        }
        if (!frame_file.empty())
            frame = frame_from_json(read_text(frame_file));
        frame.validate();
        dmrs = resolve_pattern(pattern);
        dmrs.validate(frame);
    }

    json to_json() const
    {
        return json{{"seed", seed},
                    {"threads", threads},
                    {"normalize_power", normalize},
                    {"frame", json::parse(frame_to_json(frame))},
                    {"pattern", json::parse(pattern_to_json(dmrs))}};
    }

    EvalConfig eval_config(std::size_t n, const Range &doppler, const std::string &predictions) const
    {
        EvalConfig c;
        c.frame = frame;
        c.pattern = dmrs;
        c.doppler_hz = doppler;
        c.n = n;
        c.base_seed = seed;
        c.normalize_power = normalize;
        c.threads = threads;
        c.predictions_dir = predictions;
        return c;
    }
};

json profile_json(const PowerDelayProfile &p)
{
    return json::parse(profile_to_json_text(p));
}

void write_config(const std::string &dir, const std::string &command, json config)
{
    fs::create_directories(dir);
    config["command"] = command;
    config["cdl_tables_version"] = cdl_tables_version();
    const fs::path path = fs::path(dir) / (command + "_config.json");
    std::ofstream f(path, std::ios::binary);
    f << config.dump(2) << '\n';
    if (!f)
        throw std::runtime_error("Cannot write " + path.string());
}

fs::path output_path(const Common &c, const std::string &name)
{
    fs::create_directories(c.out_dir);
    return fs::path(c.out_dir) / name;
}

// ---- subcommands -------------------------------------------------------------

struct Simulate
{
    Common common;
    std::string channel = "Designed";
    double snr = 20.0;
    double doppler = 0.0;
    std::string path = "fd";

    void add(CLI::App *app)
    {
        common.add(app);
        app->add_option("--channel", channel, "Channel selector");
        app->add_option("--snr", snr, "SNR in dB (inf disables noise)");
        app->add_option("--doppler", doppler, "Maximum Doppler shift in Hz");
        app->add_option("--path", path, "Link path: fd or td")->check(CLI::IsMember({"fd", "td"}));
    }

    int run(std::ostream &out)
    {
        common.resolve_all();
        const auto pdp = resolve(channel);
        const ChannelSpec spec{pdp, doppler, common.normalize};
        const LinkPath link = path == "td" ? LinkPath::time_domain : LinkPath::frequency_domain;
        const SlotOutcome slot = simulate_slot(spec, common.dmrs, common.frame, snr, common.seed, link);

        const MmseFilter filter(analytic_correlations(spec.effective_pdp(), common.dmrs, common.frame), snr,
                                common.dmrs.pilot_value);
        const auto h_ls = bilinear_to_slot(slot.ls.values, common.dmrs, common.frame);
        const auto h_mmse = bilinear_to_slot(filter.apply(slot.ls), common.dmrs, common.frame);

        write_grid_dump(output_path(common, "H.grid").string(), slot.H, "H");
        write_grid_dump(output_path(common, "Y.grid").string(), slot.Y, "Y");
        write_grid_dump(output_path(common, "H_ls.grid").string(), h_ls, "H_ls");
        write_grid_dump(output_path(common, "H_mmse.grid").string(), h_mmse, "H_mmse");

        json summary{{"channel", channel},
                     {"snr_db", number_or_string(snr)},
                     {"mse_ls", mse(h_ls, slot.H)},
                     {"mse_mmse", mse(h_mmse, slot.H)}};
        out << summary.dump(2) << '\n';

        json cfg = common.to_json();
        cfg["channel"] = channel;
        cfg["pdp"] = profile_json(pdp);
        cfg["snr_db"] = number_or_string(snr);
        cfg["doppler_hz"] = doppler;
        cfg["path"] = path;
        write_config(common.out_dir, "simulate", cfg);
        return exit_ok;
    }
};

struct DesignCheck
{
    Common common;
    std::string designed, candidate;
    double tol_db = 0.0;
    bool linear = false;

    void add(CLI::App *app)
    {
        common.add(app, false);
        app->add_option("--designed", designed, "Designed channel selector")->required();
        app->add_option("--candidate", candidate, "Candidate channel selector")->required();
        app->add_option("--tol-db", tol_db, "Envelope tolerance in dB")->check(CLI::NonNegativeNumber);
        app->add_flag("--linear", linear, "Compare envelopes in linear power");
    }

    int run(std::ostream &out)
    {
        common.resolve_all();
        const auto d = resolve(designed), c = resolve(candidate);
        const auto report = is_applicable(c, d, tol_db, linear ? EnvelopeScale::linear : EnvelopeScale::db);
        out << report.to_json(candidate, designed, tol_db) << '\n';

        write_config(common.out_dir, "design-check",
                     {{"designed", designed},
                      {"candidate", candidate},
                      {"designed_pdp", profile_json(d)},
                      {"candidate_pdp", profile_json(c)},
                      {"tol_db", tol_db},
                      {"scale", linear ? "linear" : "db"}});
        return exit_ok;
    }
};

struct Eigs
{
    Common common;
    std::string channel = "Designed";
    std::size_t count = 8;
    std::string mode = "analytic";
    std::size_t realizations = 2000;

    void add(CLI::App *app)
    {
        common.add(app, false);
        app->add_option("--channel", channel, "Channel selector");
        app->add_option("--count", count, "Number of eigenvalues to print")->check(CLI::PositiveNumber);
        app->add_option("--mode", mode, "analytic or empirical")->check(CLI::IsMember({"analytic", "empirical"}));
        app->add_option("--realizations", realizations, "Realizations for the empirical mode")
            ->check(CLI::PositiveNumber);
    }

    int run(std::ostream &out)
    {
        common.resolve_all();
        auto pdp = resolve(channel);
        if (common.normalize)
            pdp = normalize_power(pdp);
        const CorrelationMode m = mode == "empirical" ? CorrelationMode{EmpiricalCorrelation{realizations, common.seed}}
                                                      : CorrelationMode{AnalyticCorrelation{}};
        const auto spectrum = eigen_spectrum(autocorrelation_matrix(pdp, common.frame, m));

        out << "index,eigenvalue\n";
        for (std::size_t i = 0; i < std::min(count, spectrum.eigenvalues.size()); ++i)
            out << i << ',' << fmt(spectrum.eigenvalues[i]) << '\n';

        json cfg = common.to_json();
        cfg["channel"] = channel;
        cfg["pdp"] = profile_json(pdp);
        cfg["count"] = count;
        cfg["mode"] = mode;
        if (mode == "empirical")
            cfg["realizations"] = realizations;
        write_config(common.out_dir, "eigs", cfg);
        return exit_ok;
    }
};

struct GenDataset
{
    Common common;
    std::string channel = "Designed";
    std::size_t count = 0;
    std::string snr = "5:25";
    std::string doppler = "0:97";
    double val_fraction = 0.05;

    void add(CLI::App *app)
    {
        common.add(app);
        app->add_option("--channel", channel, "Channel selector");
        app->add_option("--count", count, "Number of samples")->required();
        app->add_option("--snr", snr, "SNR range lo:hi in dB");
        app->add_option("--doppler", doppler, "Doppler range lo:hi in Hz");
        app->add_option("--val-fraction", val_fraction, "Validation fraction")->check(CLI::Range(0.0, 1.0));
    }

    int run(std::ostream &out)
    {
        common.resolve_all();
        DatasetConfig c;
        c.channel = channel;
        c.pdp = resolve(channel);
        c.normalize_power = common.normalize;
        c.frame = common.frame;
        c.pattern = common.dmrs;
        c.count = count;
        c.snr_db = parse_range(snr);
        c.doppler_hz = parse_range(doppler);
        c.base_seed = common.seed;
        c.val_fraction = val_fraction;
        if (count == 0)
            throw UsageError("--count must be at least 1.");

        const auto manifest = generate_dataset(c, common.out_dir, common.threads);
        for (const auto &f : manifest.files)
            out << f.split << ' ' << f.samples << ' ' << f.sha256 << '\n';

        json cfg = common.to_json();
        cfg["channel"] = channel;
        cfg["pdp"] = profile_json(c.pdp);
        cfg["count"] = count;
        cfg["snr_db"] = {c.snr_db.lo, c.snr_db.hi};
        cfg["doppler_hz"] = {c.doppler_hz.lo, c.doppler_hz.hi};
        cfg["val_fraction"] = val_fraction;
        write_config(common.out_dir, "gen-dataset", cfg);
        return exit_ok;
    }
};

struct Eval
{
    Common common;
    std::string estimators = "ls,mmse";
    std::string channels = "all";
    std::string snr = "0:5:30";
    std::string doppler = "0:97";
    std::size_t n = 5000;
    std::string predictions;
    bool svg = false;
    bool export_inputs = false;
    std::string path = "fd";

    void add(CLI::App *app)
    {
        common.add(app);
        app->add_option("--estimators", estimators, "Comma list of ls, mmse, mmse:<channel>, external");
        app->add_option("--channels", channels, "Comma list of channel selectors, or 'all'");
        app->add_option("--snr", snr, "SNR grid in dB");
        app->add_option("--doppler", doppler, "Doppler range lo:hi in Hz");
        app->add_option("--n", n, "Realizations per point")->check(CLI::PositiveNumber);
        app->add_option("--predictions", predictions, "Directory of prediction files");
        app->add_flag("--svg", svg, "Also write an SVG plot");
        app->add_flag("--export-inputs", export_inputs,
                      "Write the evaluated inputs/labels as sample files instead of scoring");
        app->add_option("--path", path, "Link path used by --export-inputs: fd or td")
            ->check(CLI::IsMember({"fd", "td"}));
    }

    int run(std::ostream &out)
    {
        common.resolve_all();
        const auto chans = resolve_list(channels);
        const auto grid = parse_number_list(snr);
        const auto cfg_eval = common.eval_config(n, parse_range(doppler), predictions);

        json cfg = common.to_json();
        cfg["channels"] = json::array();
        for (const auto &c : chans)
            cfg["channels"].push_back({{"name", c.name}, {"pdp", profile_json(c.pdp)}});
        cfg["snr_db"] = json::array();
        for (double s : grid)
            cfg["snr_db"].push_back(number_or_string(s));
        cfg["doppler_hz"] = {cfg_eval.doppler_hz.lo, cfg_eval.doppler_hz.hi};
        cfg["n"] = n;

        if (export_inputs)
        {
            const fs::path dir = output_path(common, "inputs");
            fs::create_directories(dir);
            const LinkPath link = path == "td" ? LinkPath::time_domain : LinkPath::frequency_domain;
            for (const auto &c : chans)
                for (double s : grid)
                {
                    const auto file = dir / prediction_file_name(c.name, s);
                    export_eval_set(c, s, cfg_eval, file.string(), link);
                    out << file.string() << '\n';
                }
            cfg["export_inputs"] = true;
            cfg["path"] = path;
            write_config(common.out_dir, "eval", cfg);
            return exit_ok;
        }

        std::vector<EstimatorSpec> specs;
        for (const auto &e : split(estimators, ','))
        {
            try
            {
                specs.push_back(EstimatorSpec::parse(e));
            }
            catch (const std::invalid_argument &ex)
            {
                throw UsageError(ex.what());
            }
            if (specs.back().kind == EstimatorSpec::Kind::external && predictions.empty())
                throw UsageError("The external estimator needs --predictions DIR.");
        }
        if (specs.empty())
            throw UsageError("Empty estimator list.");

        std::vector<EvalPoint> table;
        for (const auto &s : specs)
        {
            if (common.verbose)
                std::cerr << "eval: " << s.id() << '\n';
            auto part = mse_vs_snr(s, chans, grid, cfg_eval);
            table.insert(table.end(), part.begin(), part.end());
        }

        const auto csv = output_path(common, "eval.csv");
        write_csv(csv.string(), table);
        if (svg)
            write_svg(output_path(common, "eval.svg").string(), table, "MSE vs SNR");
        write_csv(out, table);

        cfg["estimators"] = json::array();
        for (const auto &s : specs)
            cfg["estimators"].push_back(s.id());
        cfg["predictions"] = predictions;
        write_config(common.out_dir, "eval", cfg);
        return exit_ok;
    }
};

struct Grid
{
    Common common;
    std::string family = "mmse";
    std::string train = "Designed,DC3,ETU,EPA,Flat";
    std::string test = "Designed,DC3,ETU,EPA,Flat";
    double snr = 15.0;
    std::string doppler = "0:97";
    std::size_t n = 5000;
    std::string predictions;

    void add(CLI::App *app)
    {
        common.add(app);
        app->add_option("--family", family, "mmse or external")->check(CLI::IsMember({"mmse", "external"}));
        app->add_option("--train", train, "Comma list of training channels");
        app->add_option("--test,--channels", test, "Comma list of test channels");
        app->add_option("--snr", snr, "SNR in dB");
        app->add_option("--doppler", doppler, "Doppler range lo:hi in Hz");
        app->add_option("--n", n, "Realizations per cell")->check(CLI::PositiveNumber);
        app->add_option("--predictions", predictions, "Directory holding <train>/<test>.bin");
    }

    int run(std::ostream &out)
    {
        common.resolve_all();
        const auto tr = resolve_list(train), te = resolve_list(test);
        const auto kind = family == "external" ? EstimatorSpec::Kind::external : EstimatorSpec::Kind::mmse_stats;
        if (kind == EstimatorSpec::Kind::external && predictions.empty())
            throw UsageError("--family external needs --predictions DIR.");
        const auto cfg_eval = common.eval_config(n, parse_range(doppler), predictions);
        const auto g = generalization_grid(kind, tr, te, snr, cfg_eval);

        const auto table = g.flatten();
        write_csv(output_path(common, "grid.csv").string(), table);
        write_csv(out, table);

        json cfg = common.to_json();
        cfg["family"] = family;
        cfg["train"] = json::array();
        for (const auto &c : tr)
            cfg["train"].push_back({{"name", c.name}, {"pdp", profile_json(c.pdp)}});
        cfg["test"] = json::array();
        for (const auto &c : te)
            cfg["test"].push_back({{"name", c.name}, {"pdp", profile_json(c.pdp)}});
        cfg["snr_db"] = number_or_string(snr);
        cfg["doppler_hz"] = {cfg_eval.doppler_hz.lo, cfg_eval.doppler_hz.hi};
        cfg["n"] = n;
        cfg["predictions"] = predictions;
        write_config(common.out_dir, "grid", cfg);
        return exit_ok;
    }
};

struct SweepDs
{
    Common common;
    std::string estimators = "ls,mmse";
    std::string profiles = "CDL-A,CDL-B,CDL-C";
    std::string ds = "100,200,500,1000,2000,5000,10000,20000,30000";
    double snr = 20.0;
    std::string doppler = "0:97";
    std::size_t n = 5000;
    std::string predictions;
    bool svg = false;

    void add(CLI::App *app)
    {
        common.add(app);
        app->add_option("--estimators", estimators, "Comma list of ls, mmse, mmse:<channel>, external");
        app->add_option("--profiles,--channels", profiles, "Comma list of CDL profiles");
        app->add_option("--ds", ds, "Desired delay spreads in ns");
        app->add_option("--snr", snr, "SNR in dB");
        app->add_option("--doppler", doppler, "Doppler range lo:hi in Hz");
        app->add_option("--n", n, "Realizations per point")->check(CLI::PositiveNumber);
        app->add_option("--predictions", predictions, "Directory of prediction files");
        app->add_flag("--svg", svg, "Also write an SVG plot");
    }

    int run(std::ostream &out)
    {
        common.resolve_all();
        std::vector<CdlProfile> cdl;
        for (const auto &p : split(profiles, ','))
        {
            try
            {
                cdl.push_back(cdl_profile(p));
            }
            catch (const std::invalid_argument &e)
            {
                throw UsageError(e.what());
            }
        }
        const auto grid = parse_number_list(ds);
        for (double d : grid)
            if (!(d > 0.0))
                throw UsageError("Delay spreads must be positive.");
        const auto cfg_eval = common.eval_config(n, parse_range(doppler), predictions);

        std::vector<EvalPoint> table;
        for (const auto &e : split(estimators, ','))
        {
            EstimatorSpec s;
            try
            {
                s = EstimatorSpec::parse(e);
            }
            catch (const std::invalid_argument &ex)
            {
                throw UsageError(ex.what());
            }
            auto part = ds_sweep(s, cdl, grid, snr, cfg_eval);
            table.insert(table.end(), part.begin(), part.end());
        }

        write_csv(output_path(common, "sweep_ds.csv").string(), table);
        if (svg)
            write_svg(output_path(common, "sweep_ds.svg").string(), table, "MSE vs delay spread");
        write_csv(out, table);

        json cfg = common.to_json();
        cfg["estimators"] = split(estimators, ',');
        cfg["snr_db"] = number_or_string(snr);
        cfg["doppler_hz"] = {cfg_eval.doppler_hz.lo, cfg_eval.doppler_hz.hi};
        cfg["n"] = n;
        cfg["ds_ns"] = grid;
        // The scaled delays actually simulated, one profile per (CDL, ds).
        cfg["scaled_profiles"] = json::array();
        for (const auto &p : cdl)
            for (double d : grid)
                cfg["scaled_profiles"].push_back(profile_json(scale_cdl(p, d)));
        cfg["predictions"] = predictions;
        write_config(common.out_dir, "sweep-ds", cfg);
        return exit_ok;
    }
};

struct Suggest
{
    Common common;
    std::string channels = "all";
    double margin_db = 0.0;
    double extra_ns = 0.0;

    void add(CLI::App *app)
    {
        common.add(app, false);
        app->add_option("--channels", channels, "Channels the design must cover, or 'all'");
        app->add_option("--margin-db", margin_db, "Envelope margin in dB")->check(CLI::NonNegativeNumber);
        app->add_option("--extra-ns", extra_ns, "Flat extension beyond the longest channel")
            ->check(CLI::NonNegativeNumber);
    }

    int run(std::ostream &out)
    {
        common.resolve_all();
        const auto chans = resolve_list(channels);
        std::vector<PowerDelayProfile> pdps;
        for (const auto &c : chans)
            pdps.push_back(c.pdp);
        const auto s = suggest_envelope(pdps, margin_db, extra_ns);
        const std::string text = profile_to_json_text(s);

        std::ofstream f(output_path(common, "suggested.json"), std::ios::binary);
        f << text << '\n';
        if (!f)
            throw std::runtime_error("Cannot write suggested.json");
        out << text << '\n';

        write_config(common.out_dir, "suggest",
                     {{"channels", split(channels, ',')}, {"margin_db", margin_db}, {"extra_ns", extra_ns}});
        return exit_ok;
    }
};
} // namespace

std::vector<double> parse_number_list(const std::string &text)
{
    std::vector<double> out;
    if (text.find(':') != std::string::npos)
    {
        const auto p = split(text, ':');
        if (p.size() != 3)
            throw UsageError("Grid must be start:step:stop, got '" + text + "'");
        const double a = to_number(p[0]), step = to_number(p[1]), b = to_number(p[2]);
        if (!(step > 0.0) || !(b >= a) || !std::isfinite(a) || !std::isfinite(b))
            throw UsageError("Grid '" + text + "' needs step > 0 and stop >= start.");
        const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(a + static_cast<double>(i) * step);
        return out;
    }
    for (const auto &s : split(text, ','))
        out.push_back(to_number(s));
    if (out.empty())
        throw UsageError("Empty number list.");
    return out;
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"pdpkit - power-delay-profile design and OFDM channel estimation workbench", "pdpkit"};
    app.require_subcommand(1);

    Simulate simulate;
    DesignCheck design_check;
    Eigs eigs;
    GenDataset gen_dataset;
    Eval eval;
    Grid grid;
    SweepDs sweep_ds;
    Suggest suggest;

    auto *c_sim = app.add_subcommand("simulate", "Simulate one slot and dump H, Y and estimates");
    auto *c_chk = app.add_subcommand("design-check", "Check a candidate channel against a designed PDP");
    auto *c_eig = app.add_subcommand("eigs", "Eigenvalues of the frequency auto-correlation (CSV)");
    auto *c_gen = app.add_subcommand("gen-dataset", "Generate a training dataset");
    auto *c_eval = app.add_subcommand("eval", "MSE vs SNR");
    auto *c_grid = app.add_subcommand("grid", "Train x test generalization grid");
    auto *c_ds = app.add_subcommand("sweep-ds", "CDL delay-spread sweep");
    auto *c_sug = app.add_subcommand("suggest", "Suggest a PDP covering a set of channels");
    simulate.add(c_sim);
    design_check.add(c_chk);
    eigs.add(c_eig);
    gen_dataset.add(c_gen);
    eval.add(c_eval);
    grid.add(c_grid);
    sweep_ds.add(c_ds);
    suggest.add(c_sug);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &)
    {
        out << app.help();
        return exit_ok;
    }
    catch (const CLI::ParseError &e)
    {
        err << "error: " << e.what() << "\n\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return exit_usage;
    }

    try
    {
        if (c_sim->parsed())
            return simulate.run(out);
        if (c_chk->parsed())
            return design_check.run(out);
        if (c_eig->parsed())
            return eigs.run(out);
        if (c_gen->parsed())
            return gen_dataset.run(out);
        if (c_eval->parsed())
            return eval.run(out);
        if (c_grid->parsed())
            return grid.run(out);
        if (c_ds->parsed())
            return sweep_ds.run(out);
        if (c_sug->parsed())
            return suggest.run(out);
    }
    catch (const UsageError &e)
    {
        err << "error: " << e.what() << "\n\n" << app.get_subcommands().front()->help();
        return exit_usage;
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << '\n';
        return exit_runtime;
    }
    err << app.help();
    return exit_usage;
}

int run(int argc, const char *const *argv)
{
    return run(argc, argv, std::cout, std::cerr);
}
} // namespace pdpkit::cli
