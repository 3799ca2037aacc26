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

#ifndef PDPKIT_DATASET_HPP
#define PDPKIT_DATASET_HPP

#include "pdpkit/channel_models.hpp"
#include "pdpkit/frame.hpp"
#include "pdpkit/tensor_file.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace pdpkit
{
inline constexpr int dataset_format_version = 1;

/// Closed interval for per-slot uniform draws; lo == hi means a fixed value.
struct Range
{
    double lo = 0.0;
    double hi = 0.0;
};

struct DatasetConfig
{
    std::string channel = "Designed"; // selector as given by the user
    PowerDelayProfile pdp = builtin_profile("Designed");
    bool normalize_power = false;
    FrameConfig frame;
    DmrsPattern pattern;
    std::size_t count = 0;
    Range snr_db{5.0, 25.0};
    Range doppler_hz{0.0, 97.0};
    std::uint64_t base_seed = 0;
    double val_fraction = 0.05;

    std::size_t val_count() const;
    std::size_t train_count() const { return count - val_count(); }
};

struct DatasetFile
{
    std::string split; // "train" or "val"
    std::string file;  // relative to the dataset directory
    std::uint64_t samples = 0;
    std::string sha256;
};

/// JSON sidecar (manifest.json) binding the sample files to their generation settings.
struct DatasetManifest
{
    int format_version = dataset_format_version;
    DatasetConfig config;
    std::vector<DatasetFile> files;

    std::string to_json() const;
    static DatasetManifest from_json(const std::string &text);
};

/// Generates count samples into out_dir (train.bin, val.bin, manifest.json). Sample i uses
/// seed derive_seed(base_seed, i) and draws its SNR and Doppler uniformly from the
/// configured ranges; the first train_count() samples form the training split. Output is
/// byte-identical for identical arguments whatever the thread count (0 = all cores).
///
/// A ".partial" marker exists in out_dir while writing and is only removed once the
/// manifest is in place; a failed run never leaves a manifest behind.
DatasetManifest generate_dataset(const DatasetConfig &config, const std::filesystem::path &out_dir,
                                 unsigned threads = 0);

/// Opened dataset with verified digests.
class Dataset
{
public:
    /// Throws std::runtime_error on a missing/partial dataset, a format version mismatch,
    /// a digest mismatch (naming the file) or a truncated file.
    static Dataset open(const std::filesystem::path &dir);

    const DatasetManifest &manifest() const { return manifest_; }

    /// Streaming reader over one split, samples in stored order.
    TensorReader reader(const std::string &split) const;
    std::vector<Sample> read_all(const std::string &split) const;

private:
    std::filesystem::path dir_;
    DatasetManifest manifest_;
};

// Shared JSON helpers for frame/pattern configuration.
std::string frame_to_json(const FrameConfig &frame);
std::string pattern_to_json(const DmrsPattern &pattern);
FrameConfig frame_from_json(const std::string &text);
DmrsPattern pattern_from_json(const std::string &text);
} // namespace pdpkit

#endif
