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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "upcross/level_ladder.hpp"
#include "upcross/skeleton.hpp"
#include "upcross/upcrossing_field.hpp"

namespace upcross {

/// nu_k = sqrt(2^-k log_b(2^k)); natural log by default.
double normalizer(int level, double log_base = std::numbers::e);

/// Fine-level upcrossing field standing in for the local time: l(t, x) is
/// U^K(t, x) at the reference level K.
class LocalTimeProxy {
 public:
  explicit LocalTimeProxy(UpcrossingField fine) : field_(std::move(fine)) {}

  int level() const noexcept { return field_.level(); }
  const UpcrossingField& field() const noexcept { return field_; }

  double value(double t, double x) const { return field_.U_value(t, x); }
  /// max over x of value(t, x).
  double sup_value(double t) const;

 private:
  UpcrossingField field_;
};

LocalTimeProxy build_proxy(UpcrossingField fine_field);

struct DeviationStatistics {
  int level = 0;
  int proxy_level = 0;
  double horizon = 0.0;
  /// D(T) = sup_{t <= T} sup_x |U^k(t, x) - l(t, x)|.
  double sup_deviation = 0.0;
  double normalizer = 0.0;
  /// R = D / nu_k.
  double rate_statistic = 0.0;
  /// max_x l(T, x).
  double local_time_sup = 0.0;
  /// R - 2 sqrt(l*(T)).
  double centered_statistic = 0.0;
  /// R^2.
  double f_statistic = 0.0;
};

DeviationStatistics make_statistics(int level, int proxy_level, double horizon, double sup_deviation,
                                    double local_time_sup, double log_base = std::numbers::e);

/// Sup deviation between a coarse field and a proxy built from the same path.
///
/// The sup over t runs over the proxy's completion times <= T (both fields are
/// right-continuous step functions that only jump there; the value before a
/// jump is the value at the previous one). The sup over x runs over fine
/// cells. Throws std::invalid_argument when the coarse level exceeds the proxy
/// level or the two fields disagree on start value or horizon.
DeviationStatistics sup_deviation(const UpcrossingField& coarse, const LocalTimeProxy& proxy, double T,
                                  double log_base = std::numbers::e);

/// Running sup deviation between level `coarse_level` and `proxy_level` of a
/// LevelLadder. Only cells whose counters change are re-examined, so the cost
/// is O(1) per proxy step plus 2^(K-k) per coarse upcrossing.
class SupDeviationTracker {
 public:
  SupDeviationTracker(int coarse_level, int proxy_level);

  void after_step(const LevelLadder& ladder, int lowest_level) {
    if (lowest_level > proxy_) return;
    if (ladder.last_step_up(proxy_)) examine(ladder, ladder.value(proxy_));
    if (lowest_level <= coarse_ && ladder.last_step_up(coarse_)) {
      const std::int64_t top = ladder.value(coarse_) << shift_;
      for (std::int64_t jf = top - (std::int64_t{1} << shift_) + 1; jf <= top; ++jf) examine(ladder, jf);
    }
  }

  int coarse_level() const noexcept { return coarse_; }
  int proxy_level() const noexcept { return proxy_; }
  /// max |2^(K-k) u_k - u_K| seen so far (integer units).
  std::int64_t max_gap() const noexcept { return max_gap_; }
  double sup_deviation() const { return std::ldexp(static_cast<double>(max_gap_), 1 - proxy_); }
  double local_time_sup(const LevelLadder& ladder) const {
    return std::ldexp(static_cast<double>(ladder.max_count(proxy_)), 1 - proxy_);
  }

 private:
  void examine(const LevelLadder& ladder, std::int64_t jf) {
    // Coarse edge containing fine cell jf: ceil(jf / 2^shift).
    const std::int64_t jc = (jf + (std::int64_t{1} << shift_) - 1) >> shift_;
    const std::int64_t gap = (ladder.count(coarse_, jc) << shift_) - ladder.count(proxy_, jf);
    const std::int64_t a = gap < 0 ? -gap : gap;
    if (a > max_gap_) max_gap_ = a;
  }

  int coarse_;
  int proxy_;
  int shift_;
  std::int64_t max_gap_ = 0;
};

/// Sup deviation D(T) for the pair (coarse_level, s.level()) computed by
/// streaming the skeleton's steps through a LevelLadder.
double sup_deviation_path(const CrossingSkeleton& fine, int coarse_level, double T);

struct SubadditivityReport {
  std::size_t tested = 0;
  /// Cases with D(t) > D(s) + D_shift(t - s) + 1e-12.
  std::size_t violations = 0;
  /// Cases where the squared form D(t)^2 <= D(s)^2 + D_shift^2 fails
  /// (diagnostic only, not expected to hold).
  std::size_t squared_violations = 0;
  /// Edges/levels where u(j, t) - u(j, s) differs from the shifted count.
  std::size_t increment_violations = 0;
  double max_excess = -INFINITY;
};

/// For each coarse crossing index n in `coarse_indices` with T^k_n <= T, checks
/// the exact increment identity of every level in [k, K] and the triangle
/// bound D(T) <= D(T^k_n) + D_shift(T - T^k_n), D_shift computed on the
/// shift_tail skeleton. `fine` is the level-K skeleton.
SubadditivityReport subadditivity_check(const CrossingSkeleton& fine, int coarse_level, double T,
                                        std::span<const std::size_t> coarse_indices);

/// Same with every coarse crossing time <= T tested (plus n = 0).
SubadditivityReport subadditivity_check(const CrossingSkeleton& fine, int coarse_level, double T);

}  // namespace upcross
