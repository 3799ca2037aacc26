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

#include "catch_amalgamated.hpp"
#include "oracles.hpp"

#include "pdpkit/dataset.hpp"
#include "pdpkit/ofdm_link.hpp"
#include "pdpkit/tensor_file.hpp"

#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;
using namespace pdpkit;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;

namespace
{
fs::path scratch(const std::string &name)
{
    const auto p = fs::temp_directory_path() / ("pdpkit_test_" + name);
    fs::remove_all(p);
    return p;
}

DatasetConfig small_config(std::size_t count)
{
    DatasetConfig c;
    c.count = count;
    c.base_seed = 1234;
    return c;
}

std::string slurp(const fs::path &p)
{
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

void flip_byte(const fs::path &p, std::streamoff at)
{
    std::fstream f(p, std::ios::binary | std::ios::in | std::ios::out);
    f.seekg(at);
    char c = 0;
    f.get(c);
    f.seekp(at);
    f.put(static_cast<char>(c ^ 0x5a));
}
} // namespace

TEST_CASE("Tensor planes - row-major with interleaved re/im")
{
    arma::cx_mat m(2, 3);
    for (arma::uword r = 0; r < 2; ++r)
        for (arma::uword c = 0; c < 3; ++c)
            m(r, c) = cx(10.0 * r + c, -(10.0 * r + c));
    const auto p = to_planes(m);
    REQUIRE(p.size() == 12);
    CHECK(p[0] == 0.0f);
    CHECK(p[2] == 1.0f);  // (0, 1) re
    CHECK(p[3] == -1.0f); // (0, 1) im
    CHECK(p[6] == 10.0f); // (1, 0) re
    CHECK(arma::approx_equal(from_planes(p, 2, 3), m, "absdiff", 0.0));
    CHECK_THROWS_AS(from_planes(p, 3, 3), std::invalid_argument);
}

TEST_CASE("Tensor file - header layout and round trip")
{
    const auto path = scratch("tensor.bin");
    const TensorShape shape{4, 3, 2, 1};
    std::vector<Sample> written;
    {
        TensorWriter w(path.string(), RecordKind::sample, shape);
        for (int i = 0; i < 100; ++i)
        {
            Sample s;
            s.input.resize(shape.input_floats());
            s.label.resize(shape.label_floats());
            for (std::size_t k = 0; k < s.input.size(); ++k)
                s.input[k] = static_cast<float>(i * 1000 + k) * 0.5f;
            for (std::size_t k = 0; k < s.label.size(); ++k)
                s.label[k] = -static_cast<float>(i * 1000 + k) * 0.25f;
            s.snr_db = static_cast<float>(i);
            s.doppler_hz = static_cast<float>(2 * i);
            w.write(s);
            written.push_back(s);
        }
        w.close();
    }

    const auto bytes = slurp(path);
    REQUIRE(bytes.size() == 48 + 100 * (4 * (4 + 24 + 2)));
    CHECK(bytes.substr(0, 8) == "PDPKTNSR");
    CHECK(bytes[8] == 1);  // version
    CHECK(bytes[12] == 1); // sample kind
    CHECK(static_cast<unsigned char>(bytes[16]) == 100);
    CHECK(bytes[24] == 4);
    CHECK(bytes[28] == 3);
    CHECK(bytes[32] == 2);
    CHECK(bytes[36] == 1);

    TensorReader r(path.string());
    CHECK(r.count() == 100);
    CHECK(r.shape() == shape);
    Sample s;
    std::size_t i = 0;
    while (r.next(s))
    {
        CHECK(s.input == written[i].input);
        CHECK(s.label == written[i].label);
        CHECK(s.snr_db == written[i].snr_db);
        CHECK(s.doppler_hz == written[i].doppler_hz);
        ++i;
    }
    CHECK(i == 100);
    fs::remove(path);
}

TEST_CASE("Tensor file - corrupt headers, truncation and trailing bytes")
{
    const auto path = scratch("bad.bin");
    const TensorShape shape{2, 2, 1, 1};
    {
        TensorWriter w(path.string(), RecordKind::prediction, shape);
        const std::vector<float> v(8, 1.0f);
        w.write(std::span<const float>(v));
        w.write(std::span<const float>(v));
        w.close();
    }
    CHECK_NOTHROW(TensorReader(path.string()));

    const auto good = slurp(path);
    auto write = [&](const std::string &b) {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f << b;
    };

    write(good.substr(0, good.size() - 3));
    CHECK_THROWS_WITH(TensorReader(path.string()), ContainsSubstring("Truncated"));
    write(good + "x");
    CHECK_THROWS_WITH(TensorReader(path.string()), ContainsSubstring("trailing"));
    std::string bad_magic = good;
    bad_magic[0] = 'X';
    write(bad_magic);
    CHECK_THROWS_WITH(TensorReader(path.string()), ContainsSubstring("Not a pdpkit"));
    std::string bad_version = good;
    bad_version[8] = 9;
    write(bad_version);
    CHECK_THROWS_WITH(TensorReader(path.string()), ContainsSubstring("version"));
    fs::remove(path);
}

TEST_CASE("Prediction files - round trip")
{
    const auto path = scratch("pred.bin");
    std::vector<arma::cx_mat> est;
    for (int i = 0; i < 5; ++i)
        est.push_back(arma::cx_mat(72, 14, arma::fill::randn));
    write_predictions(path.string(), est);
    const auto back = read_predictions(path.string());
    REQUIRE(back.size() == 5);
    for (int i = 0; i < 5; ++i)
        CHECK(arma::abs(back[i] - est[i]).max() < 1e-6);
    fs::remove(path);
}

TEST_CASE("SHA-256 of a known string")
{
    const auto path = scratch("abc.txt");
    {
        std::ofstream f(path, std::ios::binary);
        f << "abc";
    }
    CHECK(sha256_file(path.string()) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    fs::remove(path);
}

TEST_CASE("Dataset - split arithmetic")
{
    auto c = small_config(20);
    CHECK(c.val_count() == 1);
    CHECK(c.train_count() == 19);
    c.count = 125000;
    CHECK(c.val_count() == 6250);
    c.count = 19;
    CHECK(c.val_count() == 0);
    c.count = 100;
    c.val_fraction = 0.07;
    CHECK(c.val_count() == 7); // 100 * 0.07 is 7.000000000000001 or 6.9999... in binary
}

TEST_CASE("Dataset - generation preconditions")
{
    const auto dir = scratch("ds_bad");
    CHECK_THROWS_AS(generate_dataset(small_config(0), dir), std::invalid_argument);
    auto c = small_config(5);
    c.snr_db = {25.0, 5.0};
    CHECK_THROWS_AS(generate_dataset(c, dir), std::invalid_argument);
    CHECK_FALSE(fs::exists(dir / "manifest.json"));
}

TEST_CASE("Dataset - deterministic, thread-count independent and verifiable")
{
    const auto a = scratch("ds_a"), b = scratch("ds_b");
    const auto ma = generate_dataset(small_config(40), a, 1);
    const auto mb = generate_dataset(small_config(40), b, 3);
    REQUIRE(ma.files.size() == 2);
    CHECK(ma.files[0].samples == 38);
    CHECK(ma.files[1].samples == 2);
    for (std::size_t i = 0; i < 2; ++i)
    {
        CHECK(ma.files[i].sha256 == mb.files[i].sha256);
        CHECK(slurp(a / ma.files[i].file) == slurp(b / mb.files[i].file));
    }
    CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));
    CHECK_FALSE(fs::exists(a / ".partial"));

    const auto ds = Dataset::open(a);
    CHECK(ds.manifest().config.count == 40);
    CHECK(ds.manifest().config.pdp == builtin_profile("Designed"));
    const auto train = ds.read_all("train");
    REQUIRE(train.size() == 38);
    for (const auto &s : train)
    {
        CHECK(s.input.size() == 36 * 2 * 2);
        CHECK(s.label.size() == 72 * 14 * 2);
        CHECK(s.snr_db >= 5.0f);
        CHECK(s.snr_db <= 25.0f);
        CHECK(s.doppler_hz >= 0.0f);
        CHECK(s.doppler_hz <= 97.0f);
        for (float v : s.label)
            CHECK(std::isfinite(v));
    }

    // A flipped byte is reported against the file it sits in.
    flip_byte(b / "val.bin", 100);
    CHECK_THROWS_WITH(Dataset::open(b), ContainsSubstring("val.bin"));

    // An interrupted run is not mistaken for a dataset.
    std::ofstream(a / ".partial").put('x');
    CHECK_THROWS_WITH(Dataset::open(a), ContainsSubstring(".partial"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("Dataset - manifest JSON round trip")
{
    DatasetManifest m;
    m.config = small_config(10);
    m.config.snr_db = {snr_noise_off, snr_noise_off};
    m.config.pattern = DmrsPattern::alternative_pattern();
    m.files.push_back({"train", "train.bin", 10, "00"});
    const auto back = DatasetManifest::from_json(m.to_json());
    CHECK(back.config.count == 10);
    CHECK(std::isinf(back.config.snr_db.lo));
    CHECK(back.config.pattern.pilot_symbols == m.config.pattern.pilot_symbols);
    CHECK(back.config.pattern.comb_offset == 1);
    CHECK(back.files[0].file == "train.bin");

    auto j = m.to_json();
    const auto pos = j.find("\"format_version\": 1");
    REQUIRE(pos != std::string::npos);
    j.replace(pos, 19, "\"format_version\": 7");
    CHECK_THROWS_WITH(DatasetManifest::from_json(j), ContainsSubstring("version"));
}

TEST_CASE("Dataset - noiseless inputs equal the labels at pilot REs")
{
    const auto dir = scratch("ds_clean");
    auto c = small_config(30);
    c.channel = "Flat";
    c.pdp = builtin_profile("Flat");
    c.snr_db = {snr_noise_off, snr_noise_off};
    generate_dataset(c, dir);
    const auto ds = Dataset::open(dir);
    const auto pil = c.pattern.pilot_subcarriers(c.frame);
    for (const auto &s : ds.read_all("train"))
    {
        const auto label = from_planes(s.label, 72, 14);
        const auto input = from_planes(s.input, 36, 2);
        for (std::size_t r = 0; r < pil.size(); ++r)
            for (std::size_t u = 0; u < 2; ++u)
                CHECK(std::abs(input(r, u) - label(pil[r], c.pattern.pilot_symbols[u])) < 1e-6);
    }
    fs::remove_all(dir);
}

TEST_CASE("Dataset - label power and sample independence", "[montecarlo]")
{
    const auto dir = scratch("ds_stats");
    const auto c = small_config(2000);
    generate_dataset(c, dir);
    const auto samples = Dataset::open(dir).read_all("train");

    double power = 0.0, n = 0.0;
    std::complex<double> cross = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i)
    {
        const auto &l = samples[i].label;
        for (std::size_t k = 0; k + 1 < l.size(); k += 2)
        {
            power += double(l[k]) * l[k] + double(l[k + 1]) * l[k + 1];
            n += 1.0;
            if (i + 1 < samples.size())
            {
                const auto &m = samples[i + 1].label;
                cross += std::complex<double>(l[k], l[k + 1]) * std::complex<double>(m[k], -m[k + 1]);
            }
        }
    }
    const double mean_power = power / n;
    CHECK_THAT(mean_power, WithinRel(oracle::total_power(c.pdp), 0.03));
    const double corr = std::abs(cross) / (power * (samples.size() - 1) / samples.size());
    CHECK(corr < 0.05);
    fs::remove_all(dir);
}
