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
#include <numbers>
#include <string>
#include <vector>

#include "upcross/exit_time.hpp"

namespace upcross {

/// Parameters shared by all experiments.
///
/// Config files are plain text, one `key = value` per line, `#` starts a
/// comment. Keys match the CLI flags without the leading dashes:
///
///   seed, paths, levels, proxy-offset, horizons, eta, delta, m, lambda,
///   threads, out, mode, log-base, step-budget
///
/// `levels` accepts a comma list and `a..b` ranges ("2..6", "2,4,6");
/// `horizons` a comma list; `log-base` a positive number or `e`.
struct ExperimentConfig {
  std::uint64_t master_seed = 20161027;
  std::size_t paths = 200;
  std::vector<int> levels{2, 3, 4, 5, 6};
  /// Reference level minus coarse level. 0 makes the proxy the coarse field
  /// itself (degenerate; only useful for tests).
  int proxy_offset = 6;
  std::vector<double> horizons{1.0};
  double eta = 1.0;
  double delta = 1.0;
  int m = 1;
  double lambda = 0.5;
  DurationMode mode = DurationMode::exact;
  double log_base = std::numbers::e;
  /// Refuse runs whose projected fine-step count exceeds this.
  double step_budget = 2e10;

  // Execution settings; these do not affect results and are not echoed.
  std::string output;
  unsigned threads = 0;  ///< 0: UPCROSS_THREADS, else hardware concurrency

  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;

  /// Canonical `key = value` rendering of the result-affecting settings.
  std::string echo() const;
};

/// Applies one setting; throws std::invalid_argument on unknown keys or
/// malformed values.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Applies every `key = value` line of `text` on top of `config`.
void apply_config_text(ExperimentConfig& config, const std::string& text);
ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = {});

std::vector<int> parse_levels(const std::string& text);
std::vector<double> parse_doubles(const std::string& text);

/// Worker count: `requested` if nonzero, else UPCROSS_THREADS, else hardware.
unsigned resolve_threads(unsigned requested);

}  // namespace upcross
