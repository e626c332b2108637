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

#include "upcross/skeleton.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

namespace upcross {

std::int64_t to_grid_units(double x, int level) {
  const double scaled = std::ldexp(x, level);
  if (!std::isfinite(scaled) || scaled != std::nearbyint(scaled) || std::abs(scaled) > 0x1p62) {
    throw std::invalid_argument("value " + std::to_string(x) + " is not on the 2^-" +
                                std::to_string(level) + " grid");
  }
  return static_cast<std::int64_t>(scaled);
}

CrossingSkeleton::CrossingSkeleton(int level, std::int64_t start_units, double horizon)
    : level_(level), start_(start_units), horizon_(horizon), min_(start_units), max_(start_units) {
  if (level < 0 || level > 40) throw std::invalid_argument("skeleton level out of range [0, 40]");
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("skeleton horizon must be finite and nonnegative");
  }
}

void CrossingSkeleton::push_step(double time, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("step sign must be +1 or -1");
  const double prev = times_.empty() ? 0.0 : times_.back();
  if (!(time > prev)) throw std::invalid_argument("crossing times must be strictly increasing");
  const std::int64_t v = value_units(times_.size()) + sign;
  times_.push_back(time);
  signs_.push_back(static_cast<std::int8_t>(sign));
  values_.push_back(v);
  min_ = std::min(min_, v);
  max_ = std::max(max_, v);
}

CrossingSkeleton generate_skeleton(RngStream& rng, const ExitTimeLaw& law, int level, double x0,
                                   double horizon, DurationMode mode) {
  if (level < 1) throw std::invalid_argument("generate_skeleton: level must be >= 1");
  if (!(horizon > 0.0)) throw std::invalid_argument("generate_skeleton: horizon must be positive");
  CrossingSkeleton s(level, to_grid_units(x0, level), horizon);
  stream_steps(rng, law, level, horizon, mode, [&](double t, int sign) { s.push_step(t, sign); });
  return s;
}

CrossingSkeleton coarsen(const CrossingSkeleton& s, int target_level) {
  if (target_level > s.level()) {
    throw std::invalid_argument("coarsen: target level must not exceed the skeleton level");
  }
  if (target_level < 0) throw std::invalid_argument("coarsen: negative target level");
  const int shift = s.level() - target_level;
  const std::int64_t span = std::int64_t{1} << shift;
  if (s.start_units() % span != 0) {
    throw std::invalid_argument("coarsen: start value is not aligned with the target grid");
  }
  CrossingSkeleton out(target_level, s.start_units() / span, s.horizon());
  std::int64_t last = s.start_units();
  for (std::size_t n = 1; n <= s.step_count(); ++n) {
    const std::int64_t v = s.value_units(n);
    if (v == last + span) {
      out.push_step(s.time(n), 1);
      last = v;
    } else if (v == last - span) {
      out.push_step(s.time(n), -1);
      last = v;
    }
  }
  return out;
}

std::size_t step_count_at(const CrossingSkeleton& s, double t) {
  if (!(t >= 0.0 && t <= s.horizon())) throw std::out_of_range("query time outside [0, horizon]");
  const auto times = s.times();
  return static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), t) - times.begin());
}

double walk_value_at(const CrossingSkeleton& s, double t) { return s.value(step_count_at(s, t)); }

CrossingSkeleton shift_tail(const CrossingSkeleton& s, std::size_t n) {
  if (n > s.step_count()) throw std::out_of_range("shift_tail: step index beyond the skeleton");
  const double origin = s.time(n);
  CrossingSkeleton out(s.level(), s.value_units(n), std::max(0.0, s.horizon() - origin));
  for (std::size_t i = n + 1; i <= s.step_count(); ++i) out.push_step(s.time(i) - origin, s.sign(i));
  return out;
}

namespace {

constexpr std::array<char, 8> kMagic = {'U', 'P', 'X', 'S', 'K', 'E', 'L', '1'};
constexpr std::uint32_t kDumpVersion = 1;

template <class T>
void put_le(std::ostream& out, T value) {
  std::array<unsigned char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T))) {
    throw std::runtime_error("read_skeleton: truncated input");
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

void write_skeleton(std::ostream& out, const CrossingSkeleton& s) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kDumpVersion);
  put_le<std::int32_t>(out, s.level());
  put_le<std::int64_t>(out, s.start_units());
  put_le<double>(out, s.horizon());
  put_le<std::uint64_t>(out, s.step_count());
  for (std::size_t n = 1; n <= s.step_count(); ++n) put_le<double>(out, s.duration(n));
  for (std::size_t n = 1; n <= s.step_count(); ++n) put_le<std::int8_t>(out, static_cast<std::int8_t>(s.sign(n)));
}

CrossingSkeleton read_skeleton(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw std::runtime_error("read_skeleton: bad magic");
  }
  if (get_le<std::uint32_t>(in) != kDumpVersion) throw std::runtime_error("read_skeleton: unsupported version");
  const auto level = get_le<std::int32_t>(in);
  const auto start = get_le<std::int64_t>(in);
  const auto horizon = get_le<double>(in);
  const auto count = get_le<std::uint64_t>(in);
  std::vector<double> durations(count);
  for (auto& d : durations) d = get_le<double>(in);
  CrossingSkeleton s(level, start, horizon);
  double t = 0.0;
  for (std::uint64_t i = 0; i < count; ++i) {
    t += durations[i];
    s.push_step(t, get_le<std::int8_t>(in));
  }
  return s;
}

}  // namespace upcross
