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
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "upcross/config.hpp"
#include "upcross/deviation.hpp"
#include "upcross/exit_time.hpp"
#include "upcross/report.hpp"
#include "upcross/skeleton.hpp"

namespace upcross {

/// Raised when a run's projected fine-step count exceeds the step budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Stream id of path `index` in independent sample `sample` (0, 1, 2, ...).
constexpr std::uint64_t path_stream(std::uint64_t sample, std::uint64_t index) { return (sample << 40) | index; }

inline constexpr std::uint64_t kScalingSampleA = 1;
inline constexpr std::uint64_t kScalingSampleB = 2;
inline constexpr std::uint64_t kLevySample = 4;

/// Runs fn(i) for i in [0, n) on `threads` workers. The first exception
/// thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Per-path sup-deviation results on a (level, horizon) grid, laid out
/// [level_index * horizons.size() + horizon_index].
struct PathDeviations {
  std::vector<double> sup_deviation;
  std::vector<double> local_time_sup;
};

/// Simulates one path at level max(levels) + proxy_offset up to max(horizons)
/// and tracks D and l* for every level at every horizon in one pass.
/// `levels` and `horizons` must be ascending.
PathDeviations simulate_path_deviations(const ExitTimeLaw& law, DurationMode mode, std::uint64_t seed,
                                        std::uint64_t stream, std::span<const int> levels, int proxy_offset,
                                        std::span<const double> horizons);

/// sup_{t <= T} ||U^k(t)||^q over I_m for every level and horizon, from one
/// path simulated at level max(levels). Same layout as PathDeviations.
std::vector<double> simulate_path_variation(const ExitTimeLaw& law, DurationMode mode, std::uint64_t seed,
                                            std::uint64_t stream, std::span<const int> levels, double q, int m,
                                            std::span<const double> horizons);

/// U^level(T, 0) for `paths` independent walks started at 0.
std::vector<double> levy_sample(const ExitTimeLaw& law, DurationMode mode, std::uint64_t seed, int level, double T,
                                std::size_t paths, unsigned threads);

/// Exact identities of one fine skeleton against its coarsenings.
struct IdentityReport {
  std::size_t checks = 0;
  std::size_t idempotence_failures = 0;   ///< coarsen(coarsen(s, a), b) != coarsen(s, b)
  std::size_t subsequence_failures = 0;   ///< coarse crossing times not among fine ones
  std::size_t increment_failures = 0;     ///< upcrossing increments vs shifted path
  std::size_t subadditivity_failures = 0;
  SubadditivityReport shift;  ///< full report of the shift check
  std::size_t failures() const noexcept {
    return idempotence_failures + subsequence_failures + increment_failures + subadditivity_failures;
  }
};

/// Checks every level pair below the fine level, and the shift identities at
/// `coarse_level` over all its crossing times up to T.
IdentityReport check_identities(const CrossingSkeleton& fine, int coarse_level, double T);

ExperimentReport run_sup_rate(const ExperimentConfig& config);
ExperimentReport run_lp_rate(const ExperimentConfig& config);
ExperimentReport run_variation(const ExperimentConfig& config);
ExperimentReport run_scaling_test(const ExperimentConfig& config);
ExperimentReport run_subadditivity(const ExperimentConfig& config);
ExperimentReport run_selftest(const ExperimentConfig& config);
ExperimentReport run_selftest_exit_law(const ExperimentConfig& config, std::size_t samples);

/// Projected fine-step count of each experiment, checked against
/// config.step_budget before any work starts.
double projected_steps_deviation(const ExperimentConfig& config);
double projected_steps_variation(const ExperimentConfig& config);
double projected_steps_scaling(const ExperimentConfig& config);
double projected_steps_subadditivity(const ExperimentConfig& config);

}  // namespace upcross
