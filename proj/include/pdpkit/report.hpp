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

#ifndef PDPKIT_REPORT_HPP
#define PDPKIT_REPORT_HPP

#include "pdpkit/eval_harness.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace pdpkit
{
inline constexpr const char *csv_header = "estimator,channel,snr_db,ds_ns,n,mse,stderr";

/// CSV with header; numbers use %.17g so a parse returns the exact doubles. ds_ns is empty
/// when the point has no delay spread.
void write_csv(std::ostream &os, std::span<const EvalPoint> table);
void write_csv(const std::string &path, std::span<const EvalPoint> table);

std::vector<EvalPoint> read_csv(std::istream &is);
std::vector<EvalPoint> read_csv_file(const std::string &path);

/// One line plot per channel with a log-scale MSE axis. x is snr_db, or ds_ns when every
/// point carries a delay spread. One series per estimator.
void write_svg(std::ostream &os, std::span<const EvalPoint> table, const std::string &title = "MSE");
void write_svg(const std::string &path, std::span<const EvalPoint> table, const std::string &title = "MSE");
} // namespace pdpkit

#endif
