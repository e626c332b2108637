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

#include "upcross/upcrossing_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace upcross {

std::int64_t level_index(double x, int level) {
  if (!std::isfinite(x)) throw std::invalid_argument("level_index: x must be finite");
  // ldexp is exact, so ceil gives the right-closed cell without rounding.
  return static_cast<std::int64_t>(std::ceil(std::ldexp(x, level)));
}

std::span<const double> UpcrossingField::completion_times(std::int64_t j) const noexcept {
  if (j < min_ || j > max_) return {};
  return up_[static_cast<std::size_t>(j - min_)];
}

std::size_t UpcrossingField::total_downcrossings(std::int64_t j) const noexcept {
  if (j < min_ || j > max_) return 0;
  return down_[static_cast<std::size_t>(j - min_)];
}

std::size_t UpcrossingField::upcrossings_before(std::int64_t j, double t) const {
  if (!(t >= 0.0 && t <= horizon_)) throw std::out_of_range("upcrossings_before: t outside [0, horizon]");
  const auto times = completion_times(j);
  return static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), t) - times.begin());
}

double UpcrossingField::U_value(double t, double x) const {
  const auto u = upcrossings_before(level_index(x, level_), t);
  return std::ldexp(static_cast<double>(u), 1 - level_);
}

UpcrossingField build_field(const CrossingSkeleton& s) {
  UpcrossingField f;
  f.level_ = s.level();
  f.horizon_ = s.horizon();
  f.start_ = s.start_units();
  f.min_ = s.min_value_units();
  f.max_ = s.max_value_units();
  const auto cells = static_cast<std::size_t>(f.max_ - f.min_ + 1);
  f.up_.assign(cells, {});
  f.down_.assign(cells, 0);
  std::int64_t prev = s.start_units();
  const auto values = s.values();
  const auto times = s.times();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::int64_t v = values[i];
    if (v > prev) {
      f.up_[static_cast<std::size_t>(v - f.min_)].push_back(times[i]);
      ++f.up_total_;
    } else {
      ++f.down_[static_cast<std::size_t>(prev - f.min_)];
      ++f.down_total_;
    }
    prev = v;
  }
  return f;
}

}  // namespace upcross
