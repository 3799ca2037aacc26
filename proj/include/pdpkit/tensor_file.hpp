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

#ifndef PDPKIT_TENSOR_FILE_HPP
#define PDPKIT_TENSOR_FILE_HPP

#include "pdpkit/common.hpp"

#include <armadillo>
#include <cstdint>
#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace pdpkit
{
// Binary tensor container shared by datasets and prediction files. All fields are
// little-endian. Header (48 bytes):
//
//   offset  size  field
//        0     8  magic "PDPKTNSR"
//        8     4  u32 format version (1)
//       12     4  u32 record kind (1 = sample, 2 = prediction)
//       16     8  u64 record count
//       24     4  u32 n_subcarriers       (N_f)
//       28     4  u32 n_symbols           (N_s)
//       32     4  u32 n_pilot_subcarriers (P_f)
//       36     4  u32 n_pilot_symbols     (P_s)
//       40     8  reserved, zero
//
// Sample record:     f32 input[P_f][P_s][2], f32 label[N_f][N_s][2], f32 snr_db, f32 doppler_hz
// Prediction record: f32 estimate[N_f][N_s][2]
// The last axis holds (real, imag).

inline constexpr char tensor_magic[8] = {'P', 'D', 'P', 'K', 'T', 'N', 'S', 'R'};
inline constexpr std::uint32_t tensor_format_version = 1;
inline constexpr std::size_t tensor_header_bytes = 48;

enum class RecordKind : std::uint32_t
{
    sample = 1,
    prediction = 2
};

struct TensorShape
{
    std::uint32_t n_subcarriers = 0;
    std::uint32_t n_symbols = 0;
    std::uint32_t n_pilot_subcarriers = 0;
    std::uint32_t n_pilot_symbols = 0;

    std::size_t input_floats() const { return std::size_t{2} * n_pilot_subcarriers * n_pilot_symbols; }
    std::size_t label_floats() const { return std::size_t{2} * n_subcarriers * n_symbols; }
    bool operator==(const TensorShape &) const = default;
};

struct Sample
{
    std::vector<float> input; // [P_f][P_s][2]
    std::vector<float> label; // [N_f][N_s][2]
    float snr_db = 0.0f;
    float doppler_hz = 0.0f;
};

/// Row-major (row, col, re/im) float32 planes of a complex matrix.
std::vector<float> to_planes(const arma::cx_mat &m);
arma::cx_mat from_planes(std::span<const float> planes, std::size_t rows, std::size_t cols);

class TensorWriter
{
public:
    TensorWriter(const std::string &path, RecordKind kind, const TensorShape &shape);
    ~TensorWriter();
    TensorWriter(const TensorWriter &) = delete;
    TensorWriter &operator=(const TensorWriter &) = delete;

    void write(const Sample &s);
    void write(std::span<const float> prediction);

    /// Patches the record count into the header and flushes. Throws on I/O failure.
    void close();

    std::uint64_t count() const { return count_; }

private:
    void put(std::span<const float> values);

    std::string path_;
    RecordKind kind_;
    TensorShape shape_;
    std::ofstream out_;
    std::uint64_t count_ = 0;
    bool closed_ = false;
};

class TensorReader
{
public:
    /// Validates the header; throws std::runtime_error on a bad magic, an unknown
    /// version or a file too short for its declared record count.
    explicit TensorReader(const std::string &path);

    RecordKind kind() const { return kind_; }
    const TensorShape &shape() const { return shape_; }
    std::uint64_t count() const { return count_; }

    bool next(Sample &s);
    bool next(std::vector<float> &prediction);

private:
    void get(std::span<float> values);

    std::string path_;
    std::ifstream in_;
    RecordKind kind_ = RecordKind::sample;
    TensorShape shape_;
    std::uint64_t count_ = 0;
    std::uint64_t read_ = 0;
};

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string &path);

void write_predictions(const std::string &path, std::span<const arma::cx_mat> estimates);
std::vector<arma::cx_mat> read_predictions(const std::string &path);
} // namespace pdpkit

#endif
