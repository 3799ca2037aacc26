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

#include "pdpkit/dataset.hpp"
#include "pdpkit/slot_sim.hpp"

#include <json.hpp>
#include <omp.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace pdpkit
{
namespace fs = std::filesystem;
using nlohmann::json;

namespace
{
json number_or_inf(double v)
{
    if (std::isfinite(v))
        return v;
    return v > 0 ? "inf" : "-inf";
}

double read_number_or_inf(const json &j)
{
    if (j.is_string())
    {
        const auto s = j.get<std::string>();
        if (s == "inf")
            return std::numeric_limits<double>::infinity();
        if (s == "-inf")
            return -std::numeric_limits<double>::infinity();
        throw std::runtime_error("Bad numeric value in manifest: " + s);
    }
    return j.get<double>();
}

json frame_json(const FrameConfig &f)
{
    return {{"n_subcarriers", f.n_subcarriers}, {"n_symbols", f.n_symbols},
            {"subcarrier_spacing_hz", f.subcarrier_spacing_hz}, {"fft_size", f.fft_size},
            {"cp_length", f.cp_length}, {"impl_delay", f.impl_delay}, {"carrier_hz", f.carrier_hz}};
}

FrameConfig frame_parse(const json &j)
{
    FrameConfig f;
    f.n_subcarriers = j.value("n_subcarriers", f.n_subcarriers);
    f.n_symbols = j.value("n_symbols", f.n_symbols);
    f.subcarrier_spacing_hz = j.value("subcarrier_spacing_hz", f.subcarrier_spacing_hz);
    f.fft_size = j.value("fft_size", f.fft_size);
    f.cp_length = j.value("cp_length", f.cp_length);
    f.impl_delay = j.value("impl_delay", f.impl_delay);
    f.carrier_hz = j.value("carrier_hz", f.carrier_hz);
    f.validate();
    return f;
}

json pattern_json(const DmrsPattern &p)
{
    return {{"pilot_symbols", p.pilot_symbols},
            {"comb_offset", p.comb_offset},
            {"comb_spacing", p.comb_spacing},
            {"pilot_value", {p.pilot_value.real(), p.pilot_value.imag()}}};
}

DmrsPattern pattern_parse(const json &j)
{
    DmrsPattern p;
    p.pilot_symbols = j.value("pilot_symbols", p.pilot_symbols);
    p.comb_offset = j.value("comb_offset", p.comb_offset);
    p.comb_spacing = j.value("comb_spacing", p.comb_spacing);
    if (j.contains("pilot_value"))
    {
        const auto v = j.at("pilot_value").get<std::vector<double>>();
        if (v.size() != 2)
            throw std::invalid_argument("pilot_value must be [re, im].");
        p.pilot_value = cx(v[0], v[1]);
    }
    return p;
}

void write_text_file(const fs::path &path, const std::string &text)
{
    std::ofstream out(path, std::ios::trunc);
    out << text;
    out.flush();
    if (!out)
        throw std::runtime_error("Failed writing " + path.string());
}

std::string read_text_file(const fs::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("Cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Sample make_sample(const DatasetConfig &c, std::size_t index)
{
    const std::uint64_t slot_seed = derive_seed(c.base_seed, index);
    std::mt19937_64 rng(derive_seed(slot_seed, stream::draw));
    auto draw = [&rng](const Range &r)
    {
        if (r.lo == r.hi)
            return r.lo;
        return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
    };
    const double snr = draw(c.snr_db);
    const double doppler = draw(c.doppler_hz);

    const ChannelSpec spec{c.pdp, doppler, c.normalize_power};
    const SlotOutcome slot = simulate_slot(spec, c.pattern, c.frame, snr, slot_seed);

    Sample s;
    s.input = to_planes(slot.ls.values);
    s.label = to_planes(slot.H);
    s.snr_db = static_cast<float>(snr);
    s.doppler_hz = static_cast<float>(doppler);
    return s;
}

void check_range(const Range &r, const char *what)
{
    if (std::isnan(r.lo) || std::isnan(r.hi) || r.lo > r.hi)
        throw std::invalid_argument(std::string("Invalid ") + what + " range.");
    if (r.lo != r.hi && (!std::isfinite(r.lo) || !std::isfinite(r.hi)))
        throw std::invalid_argument(std::string(what) + " range must be finite unless it is a single value.");
}
} // namespace

std::size_t DatasetConfig::val_count() const
{
    return static_cast<std::size_t>(std::floor(static_cast<double>(count) * val_fraction + 1e-9));
}

std::string frame_to_json(const FrameConfig &frame) { return frame_json(frame).dump(); }
std::string pattern_to_json(const DmrsPattern &pattern) { return pattern_json(pattern).dump(); }
FrameConfig frame_from_json(const std::string &text) { return frame_parse(json::parse(text)); }
DmrsPattern pattern_from_json(const std::string &text) { return pattern_parse(json::parse(text)); }

std::string DatasetManifest::to_json() const
{
    const auto &c = config;
    json j;
    j["format"] = "pdpkit-dataset";
    j["format_version"] = format_version;
    j["frame"] = frame_json(c.frame);
    j["pattern"] = pattern_json(c.pattern);
    j["channel"] = {{"selector", c.channel},
                    {"pdp", json::parse(profile_to_json_text(c.pdp))},
                    {"normalize_power", c.normalize_power}};
    j["count"] = c.count;
    j["snr_db"] = {number_or_inf(c.snr_db.lo), number_or_inf(c.snr_db.hi)};
    j["doppler_hz"] = {c.doppler_hz.lo, c.doppler_hz.hi};
    j["base_seed"] = c.base_seed;
    j["split"] = {{"train", 1.0 - c.val_fraction}, {"val", c.val_fraction}};
    j["files"] = json::array();
    for (const auto &f : files)
        j["files"].push_back({{"split", f.split}, {"file", f.file}, {"samples", f.samples}, {"sha256", f.sha256}});
    return j.dump(2) + "\n";
}

DatasetManifest DatasetManifest::from_json(const std::string &text)
{
    DatasetManifest m;
    try
    {
        const auto j = json::parse(text);
        if (j.value("format", std::string()) != "pdpkit-dataset")
            throw std::runtime_error("Not a pdpkit dataset manifest.");
        m.format_version = j.at("format_version").get<int>();
        if (m.format_version != dataset_format_version)
            throw std::runtime_error("Dataset format version " + std::to_string(m.format_version) +
                                     " is not supported (expected " + std::to_string(dataset_format_version) + ").");

        auto &c = m.config;
        c.frame = frame_parse(j.at("frame"));
        c.pattern = pattern_parse(j.at("pattern"));
        c.channel = j.at("channel").at("selector").get<std::string>();
        c.pdp = profile_from_json_text(j.at("channel").at("pdp").dump());
        c.normalize_power = j.at("channel").at("normalize_power").get<bool>();
        c.count = j.at("count").get<std::size_t>();
        c.snr_db = {read_number_or_inf(j.at("snr_db").at(0)), read_number_or_inf(j.at("snr_db").at(1))};
        c.doppler_hz = {j.at("doppler_hz").at(0).get<double>(), j.at("doppler_hz").at(1).get<double>()};
        c.base_seed = j.at("base_seed").get<std::uint64_t>();
        c.val_fraction = j.at("split").at("val").get<double>();
        for (const auto &f : j.at("files"))
            m.files.push_back({f.at("split").get<std::string>(), f.at("file").get<std::string>(),
                               f.at("samples").get<std::uint64_t>(), f.at("sha256").get<std::string>()});
    }
    catch (const json::exception &e)
    {
        throw std::runtime_error(std::string("Malformed dataset manifest: ") + e.what());
    }
    return m;
}

DatasetManifest generate_dataset(const DatasetConfig &config, const fs::path &out_dir, unsigned threads)
{
    if (config.count == 0)
        throw std::invalid_argument("generate_dataset: count must be at least 1.");
    if (!(config.val_fraction >= 0.0 && config.val_fraction <= 1.0))
        throw std::invalid_argument("generate_dataset: validation fraction must lie in [0, 1].");
    check_range(config.snr_db, "SNR");
    check_range(config.doppler_hz, "Doppler");
    if (config.doppler_hz.lo < 0.0)
        throw std::invalid_argument("generate_dataset: Doppler must be non-negative.");
    config.frame.validate();
    config.pattern.validate(config.frame);
    ChannelSpec{config.pdp, config.doppler_hz.hi, config.normalize_power}.validate(config.frame.symbol_duration_s());

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw std::runtime_error("Cannot create dataset directory " + out_dir.string() + ": " + ec.message());

    const fs::path manifest_path = out_dir / "manifest.json";
    const fs::path marker = out_dir / ".partial";
    fs::remove(manifest_path);
    write_text_file(marker, "incomplete\n");

    const TensorShape shape{static_cast<std::uint32_t>(config.frame.n_subcarriers),
                            static_cast<std::uint32_t>(config.frame.n_symbols),
                            static_cast<std::uint32_t>(config.pattern.n_pilot_subcarriers(config.frame)),
                            static_cast<std::uint32_t>(config.pattern.n_pilot_symbols())};

    const std::size_t n_train = config.train_count();
    TensorWriter train((out_dir / "train.bin").string(), RecordKind::sample, shape);
    TensorWriter val((out_dir / "val.bin").string(), RecordKind::sample, shape);

    const int n_threads = threads == 0 ? omp_get_max_threads() : static_cast<int>(threads);
    constexpr std::size_t block = 2048;
    std::vector<Sample> buffer;
    for (std::size_t start = 0; start < config.count; start += block)
    {
        const std::size_t n = std::min(block, config.count - start);
        buffer.assign(n, Sample{});

#pragma omp parallel for num_threads(n_threads) schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
            buffer[static_cast<std::size_t>(i)] = make_sample(config, start + static_cast<std::size_t>(i));

        for (std::size_t i = 0; i < n; ++i)
            (start + i < n_train ? train : val).write(buffer[i]);
    }
    train.close();
    val.close();

    DatasetManifest manifest;
    manifest.config = config;
    manifest.files.push_back({"train", "train.bin", train.count(), sha256_file((out_dir / "train.bin").string())});
    manifest.files.push_back({"val", "val.bin", val.count(), sha256_file((out_dir / "val.bin").string())});

    const fs::path tmp = out_dir / "manifest.json.tmp";
    write_text_file(tmp, manifest.to_json());
    fs::rename(tmp, manifest_path);
    fs::remove(marker);
    return manifest;
}

Dataset Dataset::open(const fs::path &dir)
{
    if (fs::exists(dir / ".partial"))
        throw std::runtime_error("Dataset in " + dir.string() + " is incomplete (.partial marker present).");

    Dataset d;
    d.dir_ = dir;
    d.manifest_ = DatasetManifest::from_json(read_text_file(dir / "manifest.json"));

    for (const auto &f : d.manifest_.files)
    {
        const auto path = (dir / f.file).string();
        if (!fs::exists(path))
            throw std::runtime_error("Dataset file missing: " + path);
        if (sha256_file(path) != f.sha256)
            throw std::runtime_error("Digest mismatch for dataset file " + path);
        TensorReader r(path);
        if (r.count() != f.samples)
            throw std::runtime_error("Sample count mismatch for dataset file " + path);
    }
    return d;
}

TensorReader Dataset::reader(const std::string &split) const
{
    for (const auto &f : manifest_.files)
        if (f.split == split)
            return TensorReader((dir_ / f.file).string());
    throw std::invalid_argument("Dataset has no split named '" + split + "'.");
}

std::vector<Sample> Dataset::read_all(const std::string &split) const
{
    auto r = reader(split);
    std::vector<Sample> out;
    out.reserve(r.count());
    Sample s;
    while (r.next(s))
        out.push_back(s);
    return out;
}
} // namespace pdpkit
