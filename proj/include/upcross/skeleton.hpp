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
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "upcross/exit_time.hpp"
#include "upcross/philox.hpp"

namespace upcross {

/// Grid spacing 2^-level.
inline double grid_spacing(int level) { return std::ldexp(1.0, -level); }

/// x * 2^level as an exact integer; throws std::invalid_argument when x is
/// not on the level grid.
std::int64_t to_grid_units(double x, int level);

/// The embedded random walk of one level: crossing times T_1 < T_2 < ... and
/// values V_n = start + sum of signs, all values in integer units of 2^-level.
///
/// Times are the primary representation (T_0 = 0 is implicit), so coarsened
/// skeletons share their times bit-for-bit with the skeleton they came from.
/// Every crossing at or before `horizon()` is present. Skeletons produced by
/// generate_skeleton also satisfy T_last >= horizon (the step crossing the
/// horizon is kept); coarsened and shifted skeletons may end earlier.
class CrossingSkeleton {
 public:
  CrossingSkeleton(int level, std::int64_t start_units, double horizon);

  /// Appends a step at `time` (strictly after the previous one) with sign +-1.
  void push_step(double time, int sign);

  int level() const noexcept { return level_; }
  double spacing() const noexcept { return grid_spacing(level_); }
  double horizon() const noexcept { return horizon_; }
  std::int64_t start_units() const noexcept { return start_; }
  double start_value() const noexcept { return std::ldexp(static_cast<double>(start_), -level_); }
  std::size_t step_count() const noexcept { return times_.size(); }

  /// T_n for n in [0, step_count()]; T_0 = 0.
  double time(std::size_t n) const { return n == 0 ? 0.0 : times_.at(n - 1); }
  /// V_n in grid units for n in [0, step_count()].
  std::int64_t value_units(std::size_t n) const { return n == 0 ? start_ : values_.at(n - 1); }
  double value(std::size_t n) const { return std::ldexp(static_cast<double>(value_units(n)), -level_); }
  /// Sign of step n, n in [1, step_count()].
  int sign(std::size_t n) const { return signs_.at(n - 1); }
  /// T_n - T_{n-1}, n in [1, step_count()].
  double duration(std::size_t n) const { return time(n) - time(n - 1); }

  std::span<const double> times() const noexcept { return times_; }
  std::span<const std::int8_t> signs() const noexcept { return signs_; }
  std::span<const std::int64_t> values() const noexcept { return values_; }

  std::int64_t min_value_units() const noexcept { return min_; }
  std::int64_t max_value_units() const noexcept { return max_; }

  friend bool operator==(const CrossingSkeleton&, const CrossingSkeleton&) = default;

 private:
  int level_;
  std::int64_t start_;
  double horizon_;
  std::vector<double> times_;
  std::vector<std::int8_t> signs_;
  std::vector<std::int64_t> values_;
  std::int64_t min_;
  std::int64_t max_;
};

/// One step of the finest walk: sign from bit 0, duration from the top 52
/// bits of a single 64-bit draw. The two are independent bits, so duration
/// and exit side are independent.
struct StepDraw {
  int sign;
  double duration;
};

inline StepDraw draw_step(RngStream& rng, const ExitTimeLaw& law, double h2, DurationMode mode) {
  const std::uint64_t bits = rng.next_u64();
  const int sign = (bits & 1u) ? 1 : -1;
  const double d = mode == DurationMode::exact ? h2 * law.sample_unit(bits) : h2;
  return {sign, d};
}

/// Streams steps of a level-`level` walk to `consumer(time, sign)` until the
/// first crossing time >= horizon (which is delivered). Returns the count.
template <class Consumer>
std::size_t stream_steps(RngStream& rng, const ExitTimeLaw& law, int level, double horizon,
                         DurationMode mode, Consumer&& consumer) {
  const double h = grid_spacing(level);
  const double h2 = h * h;
  double t = 0.0;
  std::size_t n = 0;
  while (t < horizon) {
    const StepDraw s = draw_step(rng, law, h2, mode);
    t += s.duration;
    ++n;
    consumer(t, s.sign);
  }
  return n;
}

/// Level-`level` skeleton started at x0 (grid aligned), complete to `horizon`.
CrossingSkeleton generate_skeleton(RngStream& rng, const ExitTimeLaw& law, int level, double x0,
                                   double horizon, DurationMode mode = DurationMode::exact);

/// Level-`target_level` skeleton embedded in `s`: a step is emitted each time
/// the walk first reaches the previous emitted value +- 2^-target_level.
/// Emitted times are a subsequence of `s.times()`. Throws std::invalid_argument
/// if target_level > s.level() or the start value is not aligned.
CrossingSkeleton coarsen(const CrossingSkeleton& s, int target_level);

/// N(t) = max{n : T_n <= t}. Throws std::out_of_range unless 0 <= t <= horizon.
std::size_t step_count_at(const CrossingSkeleton& s, double t);

/// V_{N(t)} as a real number (the walk A(t) plus its start value).
double walk_value_at(const CrossingSkeleton& s, double t);

/// Path restarted at T_n: steps n+1, n+2, ... with times rebased by T_n, start
/// value V_n, horizon reduced by T_n. Throws std::out_of_range for n > count.
CrossingSkeleton shift_tail(const CrossingSkeleton& s, std::size_t n);

/// Debug dump, little-endian, version 1:
///   char[8] magic "UPXSKEL1", u32 version, i32 level, i64 start (grid units),
///   f64 horizon, u64 count, f64 durations[count], i8 signs[count].
/// Times are rebuilt on load by summing durations, so they round-trip to a few
/// ulps rather than bit-exactly; values and signs round-trip exactly.
void write_skeleton(std::ostream& out, const CrossingSkeleton& s);
CrossingSkeleton read_skeleton(std::istream& in);

}  // namespace upcross
