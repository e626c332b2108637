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
#include <vector>

#include "upcross/skeleton.hpp"

namespace upcross {

/// j_k(x): the unique integer with (j-1) 2^-k < x <= j 2^-k.
std::int64_t level_index(double x, int level);

/// Completed upcrossings of one level's walk, by grid edge.
///
/// Edge j is the transition (j-1) 2^-k -> j 2^-k; its completion times are the
/// crossing times T_{n+1} at which the walk arrives at j 2^-k from below.
class UpcrossingField {
 public:
  int level() const noexcept { return level_; }
  double horizon() const noexcept { return horizon_; }
  std::int64_t start_units() const noexcept { return start_; }
  double start_value() const noexcept { return std::ldexp(static_cast<double>(start_), -level_); }

  /// Visited value range in grid units; edges with upcrossings lie in (min, max].
  std::int64_t min_index() const noexcept { return min_; }
  std::int64_t max_index() const noexcept { return max_; }

  /// Sorted completion times of edge j (empty outside the visited range).
  std::span<const double> completion_times(std::int64_t j) const noexcept;

  /// Upcrossings of edge j over the whole skeleton.
  std::size_t total_upcrossings(std::int64_t j) const noexcept { return completion_times(j).size(); }
  /// Downcrossings j 2^-k -> (j-1) 2^-k over the whole skeleton.
  std::size_t total_downcrossings(std::int64_t j) const noexcept;

  std::size_t upcrossing_count() const noexcept { return up_total_; }
  std::size_t downcrossing_count() const noexcept { return down_total_; }
  std::size_t step_count() const noexcept { return up_total_ + down_total_; }

  /// u(j 2^-k, k, t): completions at or before t. Throws std::out_of_range
  /// unless 0 <= t <= horizon.
  std::size_t upcrossings_before(std::int64_t j, double t) const;

  /// U^k(t, x) = 2 * 2^-k * u(j_k(x) 2^-k, k, t).
  double U_value(double t, double x) const;

  friend UpcrossingField build_field(const CrossingSkeleton& s);

 private:
  int level_ = 0;
  double horizon_ = 0.0;
  std::int64_t start_ = 0;
  std::int64_t min_ = 0;
  std::int64_t max_ = 0;
  std::vector<std::vector<double>> up_;  // indexed by j - min_
  std::vector<std::size_t> down_;        // indexed by j - min_
  std::size_t up_total_ = 0;
  std::size_t down_total_ = 0;
};

/// One pass over the skeleton's steps.
UpcrossingField build_field(const CrossingSkeleton& s);

}  // namespace upcross
