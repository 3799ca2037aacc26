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

#include "pdpkit/tensor_file.hpp"

#include <openssl/evp.h>

#include <array>
#include <bit>
#include <cstring>
#include <filesystem>
#include <iomanip>
#include <memory>
#include <sstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little, "tensor files are written in host order");

namespace pdpkit
{
namespace
{
template <typename T>
void put_le(char *dst, T v)
{
    std::memcpy(dst, &v, sizeof(T));
}

template <typename T>
T get_le(const char *src)
{
    T v;
    std::memcpy(&v, src, sizeof(T));
    return v;
}

std::size_t record_floats(RecordKind kind, const TensorShape &shape)
{
    return kind == RecordKind::sample ? shape.input_floats() + shape.label_floats() + 2 : shape.label_floats();
}
} // namespace

std::vector<float> to_planes(const arma::cx_mat &m)
{
    std::vector<float> out;
    out.reserve(2 * m.n_elem);
    for (arma::uword r = 0; r < m.n_rows; ++r)
        for (arma::uword c = 0; c < m.n_cols; ++c)
        {
            out.push_back(static_cast<float>(m(r, c).real()));
            out.push_back(static_cast<float>(m(r, c).imag()));
        }
    return out;
}

arma::cx_mat from_planes(std::span<const float> planes, std::size_t rows, std::size_t cols)
{
    if (planes.size() != 2 * rows * cols)
        throw std::invalid_argument("from_planes: size does not match the shape.");
    arma::cx_mat m(rows, cols);
    std::size_t i = 0;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c, i += 2)
            m(r, c) = cx(planes[i], planes[i + 1]);
    return m;
}

TensorWriter::TensorWriter(const std::string &path, RecordKind kind, const TensorShape &shape)
    : path_(path), kind_(kind), shape_(shape), out_(path, std::ios::binary | std::ios::trunc)
{
    if (!out_)
        throw std::runtime_error("Cannot open for writing: " + path);

    std::array<char, tensor_header_bytes> h{};
    std::memcpy(h.data(), tensor_magic, 8);
    put_le<std::uint32_t>(h.data() + 8, tensor_format_version);
    put_le<std::uint32_t>(h.data() + 12, static_cast<std::uint32_t>(kind));
    put_le<std::uint64_t>(h.data() + 16, 0);
    put_le<std::uint32_t>(h.data() + 24, shape.n_subcarriers);
    put_le<std::uint32_t>(h.data() + 28, shape.n_symbols);
    put_le<std::uint32_t>(h.data() + 32, shape.n_pilot_subcarriers);
    put_le<std::uint32_t>(h.data() + 36, shape.n_pilot_symbols);
    out_.write(h.data(), h.size());
    if (!out_)
        throw std::runtime_error("Failed writing header: " + path);
}

TensorWriter::~TensorWriter()
{
    if (!closed_)
    {
        try
        {
            close();
        }
        catch (...)
        {
        }
    }
}

void TensorWriter::put(std::span<const float> values)
{
    out_.write(reinterpret_cast<const char *>(values.data()), static_cast<std::streamsize>(values.size_bytes()));
    if (!out_)
        throw std::runtime_error("Write failed (disk full?): " + path_);
}

void TensorWriter::write(const Sample &s)
{
    if (kind_ != RecordKind::sample)
        throw std::logic_error("TensorWriter: not a sample file.");
    if (s.input.size() != shape_.input_floats() || s.label.size() != shape_.label_floats())
        throw std::invalid_argument("TensorWriter: sample shape does not match the header.");
    put(s.input);
    put(s.label);
    const float meta[2] = {s.snr_db, s.doppler_hz};
    put(meta);
    ++count_;
}

void TensorWriter::write(std::span<const float> prediction)
{
    if (kind_ != RecordKind::prediction)
        throw std::logic_error("TensorWriter: not a prediction file.");
    if (prediction.size() != shape_.label_floats())
        throw std::invalid_argument("TensorWriter: prediction shape does not match the header.");
    put(prediction);
    ++count_;
}

void TensorWriter::close()
{
    if (closed_)
        return;
    closed_ = true;
    char buf[8];
    put_le<std::uint64_t>(buf, count_);
    out_.seekp(16);
    out_.write(buf, 8);
    out_.flush();
    if (!out_)
        throw std::runtime_error("Failed finalizing: " + path_);
    out_.close();
}

TensorReader::TensorReader(const std::string &path) : path_(path), in_(path, std::ios::binary)
{
    if (!in_)
        throw std::runtime_error("Cannot open: " + path);

    std::array<char, tensor_header_bytes> h{};
    in_.read(h.data(), h.size());
    if (in_.gcount() != static_cast<std::streamsize>(h.size()))
        throw std::runtime_error("Truncated header: " + path);
    if (std::memcmp(h.data(), tensor_magic, 8) != 0)
        throw std::runtime_error("Not a pdpkit tensor file: " + path);
    const auto version = get_le<std::uint32_t>(h.data() + 8);
    if (version != tensor_format_version)
        throw std::runtime_error("Unsupported tensor format version " + std::to_string(version) + ": " + path);

    const auto kind = get_le<std::uint32_t>(h.data() + 12);
    if (kind != 1 && kind != 2)
        throw std::runtime_error("Unknown record kind in " + path);
    kind_ = static_cast<RecordKind>(kind);
    count_ = get_le<std::uint64_t>(h.data() + 16);
    shape_ = {get_le<std::uint32_t>(h.data() + 24), get_le<std::uint32_t>(h.data() + 28),
              get_le<std::uint32_t>(h.data() + 32), get_le<std::uint32_t>(h.data() + 36)};

    const auto expected = tensor_header_bytes + count_ * record_floats(kind_, shape_) * sizeof(float);
    const auto actual = std::filesystem::file_size(path);
    if (actual < expected)
        throw std::runtime_error("Truncated tensor file: " + path);
    if (actual > expected)
        throw std::runtime_error("Tensor file has trailing bytes: " + path);
}

void TensorReader::get(std::span<float> values)
{
    in_.read(reinterpret_cast<char *>(values.data()), static_cast<std::streamsize>(values.size_bytes()));
    if (in_.gcount() != static_cast<std::streamsize>(values.size_bytes()))
        throw std::runtime_error("Truncated tensor file: " + path_);
}

bool TensorReader::next(Sample &s)
{
    if (kind_ != RecordKind::sample)
        throw std::logic_error("TensorReader: not a sample file.");
    if (read_ == count_)
        return false;
    s.input.resize(shape_.input_floats());
    s.label.resize(shape_.label_floats());
    get(s.input);
    get(s.label);
    float meta[2];
    get(meta);
    s.snr_db = meta[0];
    s.doppler_hz = meta[1];
    ++read_;
    return true;
}

bool TensorReader::next(std::vector<float> &prediction)
{
    if (kind_ != RecordKind::prediction)
        throw std::logic_error("TensorReader: not a prediction file.");
    if (read_ == count_)
        return false;
    prediction.resize(shape_.label_floats());
    get(prediction);
    ++read_;
    return true;
}

std::string sha256_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("Cannot open for hashing: " + path);

    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 initialization failed.");

    std::vector<char> buf(1 << 16);
    while (in)
    {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (in.gcount() > 0)
            EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }

    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md, &len);

    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i)
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return hex.str();
}

void write_predictions(const std::string &path, std::span<const arma::cx_mat> estimates)
{
    TensorShape shape;
    if (!estimates.empty())
    {
        shape.n_subcarriers = static_cast<std::uint32_t>(estimates.front().n_rows);
        shape.n_symbols = static_cast<std::uint32_t>(estimates.front().n_cols);
    }
    TensorWriter w(path, RecordKind::prediction, shape);
    for (const auto &e : estimates)
        w.write(to_planes(e));
    w.close();
}

std::vector<arma::cx_mat> read_predictions(const std::string &path)
{
    TensorReader r(path);
    std::vector<arma::cx_mat> out;
    std::vector<float> buf;
    while (r.next(buf))
        out.push_back(from_planes(buf, r.shape().n_subcarriers, r.shape().n_symbols));
    return out;
}
} // namespace pdpkit
