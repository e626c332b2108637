// Copyright 2026 The upcross Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "upcross/stats.hpp"

namespace upcross {

inline constexpr const char* kVersion = "0.1.0";

/// One CSV line. Rows that aggregate over horizons (slopes, KS tests) use
/// T = 0; rows that aggregate over levels use k = 0.
struct ReportRow {
  std::string experiment;
  int k = 0;
  double T = 0.0;
  std::string statistic;
  double mean = 0.0;
  double stderr_ = 0.0;
  double median = 0.0;
  double q10 = 0.0;
  double q90 = 0.0;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
};

ReportRow make_row(const std::string& experiment, int k, double T, const std::string& statistic,
                   std::span<const double> sample, std::uint64_t seed);

/// A row carrying a single derived number (slope, p-value) in every column.
ReportRow scalar_row(const std::string& experiment, int k, double T, const std::string& statistic, double value,
                     std::size_t n_paths, std::uint64_t seed);

struct Verdict {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentReport {
  std::string experiment;
  std::vector<ReportRow> rows;
  std::vector<Verdict> verdicts;
  std::string config_echo;
  std::string version = kVersion;
  double wall_seconds = 0.0;

  bool passed() const;
  /// First row matching (k, T, statistic); throws std::out_of_range if absent.
  const ReportRow& row(int k, double T, const std::string& statistic) const;
};

/// Bit-exact CSV: fixed header, %.17g floats, '\n' line endings.
std::string to_csv(const ExperimentReport& report);
std::string to_json(const ExperimentReport& report);

/// Writes `<base>.csv` and `<base>.json`; a trailing ".csv" or ".json" on
/// `base` is stripped first.
void write_report(const ExperimentReport& report, const std::string& base);

}  // namespace upcross
