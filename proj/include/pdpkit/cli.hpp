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

#ifndef PDPKIT_CLI_HPP
#define PDPKIT_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace pdpkit::cli
{
/// Exit codes of the command-line tool.
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_runtime = 2;

/// Environment variable naming the default output directory ("." when unset).
inline constexpr const char *out_dir_env = "PDPKIT_OUT_DIR";

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);
int run(int argc, const char *const *argv);

/// Numeric list syntax shared by --snr, --ds and friends: "v", "a,b,c" or "start:step:stop"
/// (inclusive, tolerant to rounding at the end point).
std::vector<double> parse_number_list(const std::string &text);
} // namespace pdpkit::cli

#endif
