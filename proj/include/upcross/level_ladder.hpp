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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "upcross/skeleton.hpp"

namespace upcross {

/// Per-edge upcrossing counters over a growable index window.
class CellCounts {
 public:
  std::int64_t get(std::int64_t j) const noexcept {
    const std::int64_t i = j - offset_;
    return (i >= 0 && i < static_cast<std::int64_t>(counts_.size())) ? counts_[static_cast<std::size_t>(i)] : 0;
  }

  void increment(std::int64_t j) {
    std::int64_t i = j - offset_;
    if (i < 0 || i >= static_cast<std::int64_t>(counts_.size())) {
      grow(j);
      i = j - offset_;
    }
    const std::int64_t c = ++counts_[static_cast<std::size_t>(i)];
    if (c > max_) max_ = c;
  }

  std::int64_t max() const noexcept { return max_; }
  std::int64_t first_index() const noexcept { return offset_; }
  std::int64_t end_index() const noexcept { return offset_ + static_cast<std::int64_t>(counts_.size()); }

 private:
  void grow(std::int64_t j) {
    if (counts_.empty()) {
      offset_ = j - 32;
      counts_.assign(64, 0);
      return;
    }
    const auto size = static_cast<std::int64_t>(counts_.size());
    const std::int64_t lo = std::min(offset_, j);
    const std::int64_t hi = std::max(offset_ + size, j + 1);
    const std::int64_t pad = std::max<std::int64_t>(hi - lo, 64);
    std::vector<std::int64_t> next(static_cast<std::size_t>(hi - lo + 2 * pad), 0);
    const std::int64_t new_offset = lo - pad;
    std::copy(counts_.begin(), counts_.end(), next.begin() + (offset_ - new_offset));
    counts_ = std::move(next);
    offset_ = new_offset;
  }

  std::vector<std::int64_t> counts_;
  std::int64_t offset_ = 0;
  std::int64_t max_ = 0;
};

/// Online coarsening of the finest walk to every level in
/// [coarsest_level, fine_level] in a single pass, with upcrossing counters per
/// level. Level l steps whenever the fine walk first sits 2^-l away from the
/// last value l emitted. Crossing times are nested, so when level l does not
/// step no coarser level can either, and the cascade stops there.
class LevelLadder {
 public:
  LevelLadder(int fine_level, int coarsest_level, std::int64_t start_fine_units = 0)
      : fine_(fine_level), coarsest_(coarsest_level), position_(start_fine_units) {
    if (coarsest_level < 0 || coarsest_level > fine_level || fine_level > 40) {
      throw std::invalid_argument("LevelLadder: need 0 <= coarsest <= fine <= 40");
    }
    if (start_fine_units % (std::int64_t{1} << (fine_level - coarsest_level)) != 0) {
      throw std::invalid_argument("LevelLadder: start is not aligned with the coarsest grid");
    }
    levels_.resize(static_cast<std::size_t>(fine_level - coarsest_level + 1));
    for (int l = coarsest_level; l <= fine_level; ++l) {
      auto& st = at(l);
      st.shift = fine_level - l;
      st.span = std::int64_t{1} << st.shift;
      st.last = start_fine_units;
    }
  }

  /// Applies one fine step; returns the coarsest level that stepped with it.
  int step(int sign) {
    position_ += sign;
    int lowest = fine_;
    for (int l = fine_; l >= coarsest_; --l) {
      auto& st = at(l);
      const std::int64_t d = position_ - st.last;
      if (d != st.span && d != -st.span) break;
      st.last = position_;
      st.up = d > 0;
      ++st.steps;
      if (st.up) st.counts.increment(position_ >> st.shift);
      lowest = l;
    }
    return lowest;
  }

  int fine_level() const noexcept { return fine_; }
  int coarsest_level() const noexcept { return coarsest_; }

  /// Direction of the most recent step of `level`.
  bool last_step_up(int level) const { return at(level).up; }
  /// Current value of `level`'s walk in its own grid units.
  std::int64_t value(int level) const { return at(level).last >> at(level).shift; }
  std::int64_t count(int level, std::int64_t j) const { return at(level).counts.get(j); }
  std::int64_t max_count(int level) const { return at(level).counts.max(); }
  std::uint64_t steps(int level) const { return at(level).steps; }
  const CellCounts& counts(int level) const { return at(level).counts; }

 private:
  struct Level {
    int shift = 0;
    std::int64_t span = 1;
    std::int64_t last = 0;  // last emitted value, fine units
    bool up = false;
    std::uint64_t steps = 0;
    CellCounts counts;
  };
  Level& at(int l) { return levels_[static_cast<std::size_t>(l - coarsest_)]; }
  const Level& at(int l) const { return levels_[static_cast<std::size_t>(l - coarsest_)]; }

  int fine_;
  int coarsest_;
  std::int64_t position_;
  std::vector<Level> levels_;
};

/// Drives one path of the finest walk through `ladder`, stopping at the first
/// crossing time >= the last checkpoint.
///
/// The observer sees `after_step(ladder, lowest_level, time)` once per fine
/// step, after every level has been updated, and `checkpoint(i, ladder)` for
/// checkpoint i once all crossings at times <= checkpoints[i] are applied.
/// Checkpoints must be positive and ascending. Returns the fine step count.
template <class Observer>
std::size_t run_ladder_path(RngStream& rng, const ExitTimeLaw& law, DurationMode mode,
                            LevelLadder& ladder, std::span<const double> checkpoints, Observer& obs) {
  if (checkpoints.empty()) return 0;
  const double h = grid_spacing(ladder.fine_level());
  const double h2 = h * h;
  const double end = checkpoints.back();
  std::size_t next = 0;
  std::size_t n = 0;
  double t = 0.0;
  while (next < checkpoints.size()) {
    const StepDraw s = draw_step(rng, law, h2, mode);
    const double t_new = t + s.duration;
    while (next < checkpoints.size() && t_new > checkpoints[next]) obs.checkpoint(next++, ladder);
    ++n;
    if (next == checkpoints.size()) break;
    t = t_new;
    const int lowest = ladder.step(s.sign);
    obs.after_step(ladder, lowest, t);
    if (t >= end) {
      while (next < checkpoints.size()) obs.checkpoint(next++, ladder);
    }
  }
  return n;
}

}  // namespace upcross
