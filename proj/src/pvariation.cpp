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

#include "upcross/pvariation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace upcross {

std::vector<std::size_t> extrema_indices(std::span<const double> values) {
  std::vector<std::size_t> runs;  // first index of each run of equal values
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (runs.empty() || values[i] != values[runs.back()]) runs.push_back(i);
  }
  if (runs.size() <= 2) return runs;
  std::vector<std::size_t> kept{runs.front()};
  for (std::size_t r = 1; r + 1 < runs.size(); ++r) {
    const double prev = values[runs[r - 1]];
    const double cur = values[runs[r]];
    const double next = values[runs[r + 1]];
    if ((cur > prev) != (next > cur)) kept.push_back(runs[r]);
  }
  kept.push_back(runs.back());
  return kept;
}

namespace {

struct DpOutcome {
  double value = 0.0;
  std::vector<std::size_t> path;  // positions in the reduced sequence
};

DpOutcome run_dp(std::span<const double> v, double q) {
  const std::size_t n = v.size();
  std::vector<double> best(n, 0.0);
  std::vector<std::size_t> len(n, 1);
  std::vector<std::size_t> prev(n, n);
  std::size_t arg = 0;
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double cand = best[j] + abs_pow(v[i] - v[j], q);
      if (cand > best[i] || (cand == best[i] && prev[i] != n && len[j] + 1 < len[i])) {
        best[i] = cand;
        len[i] = len[j] + 1;
        prev[i] = j;
      }
    }
    if (best[i] > best[arg] || (best[i] == best[arg] && len[i] < len[arg])) arg = i;
  }
  DpOutcome out;
  out.value = best[arg];
  for (std::size_t i = arg; i != n; i = prev[i]) out.path.push_back(i);
  std::reverse(out.path.begin(), out.path.end());
  return out;
}

void check_exponent(double q) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw std::invalid_argument("q-variation needs a finite q >= 1");
}

}  // namespace

VariationResult pvar_sequence(std::span<const double> values, double q) {
  if (values.empty()) throw std::invalid_argument("pvar_sequence: empty sequence");
  check_exponent(q);
  const auto kept = extrema_indices(values);
  std::vector<double> reduced(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) reduced[i] = values[kept[i]];
  const DpOutcome dp = run_dp(reduced, q);
  VariationResult r;
  r.value = dp.value;
  for (std::size_t p : dp.path) r.indices.push_back(kept[p]);
  return r;
}

double pvar_counts(std::span<const std::int64_t> counts, double q, double scale, std::vector<double>& scratch) {
  check_exponent(q);
  // Same reduction as extrema_indices, done in place on the counts.
  scratch.clear();
  for (std::int64_t c : counts) {
    const auto v = static_cast<double>(c);
    if (!scratch.empty() && v == scratch.back()) continue;
    if (scratch.size() >= 2) {
      const double a = scratch[scratch.size() - 2];
      const double b = scratch.back();
      if ((b > a) == (v > b)) scratch.back() = v;  // b was not a turning point
      else scratch.push_back(v);
    } else {
      scratch.push_back(v);
    }
  }
  const std::size_t n = scratch.size();
  if (n < 2) return 0.0;
  // DP value only; indices are not needed here.
  std::vector<double> best(n, 0.0);
  double top = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    double b = 0.0;
    for (std::size_t j = 0; j < i; ++j) b = std::max(b, best[j] + abs_pow(scratch[i] - scratch[j], q));
    best[i] = b;
    top = std::max(top, b);
  }
  return abs_pow(scale, q) * top;
}

IntervalCells interval_cells(int level, int m) {
  if (m < 0 || level < 0 || level + m > 60) throw std::invalid_argument("interval_cells: bad level or m");
  const std::int64_t half = std::int64_t{1} << (level + m);
  return {-half, half};
}

VariationResult pvar_field(const UpcrossingField& f, double t, double q, int m) {
  check_exponent(q);
  if (m < 1) throw std::invalid_argument("pvar_field: m must be >= 1");
  const int k = f.level();
  const IntervalCells cells = interval_cells(k, m);
  const std::int64_t a = std::max(cells.first, f.min_index());
  const std::int64_t b = std::min(cells.last, f.max_index());

  std::vector<double> seq;
  std::vector<double> pts;
  auto point = [k](std::int64_t j) { return std::ldexp(static_cast<double>(j), -k); };
  if (a > b) {
    (void)f.upcrossings_before(cells.first, t);  // range check on t
    seq.push_back(0.0);
    pts.push_back(point(cells.first));
  } else {
    if (cells.first < a) {
      seq.push_back(0.0);
      pts.push_back(point(cells.first));
    }
    for (std::int64_t j = a; j <= b; ++j) {
      seq.push_back(std::ldexp(static_cast<double>(f.upcrossings_before(j, t)), 1 - k));
      pts.push_back(point(j));
    }
    if (cells.last > b) {
      seq.push_back(0.0);
      pts.push_back(point(b + 1));
    }
  }
  VariationResult r = pvar_sequence(seq, q);
  for (std::size_t i : r.indices) r.points.push_back(pts[i]);
  return r;
}

double sup_pvar_over_time(const UpcrossingField& f, double q, int m, double T) {
  check_exponent(q);
  if (m < 1) throw std::invalid_argument("sup_pvar_over_time: m must be >= 1");
  if (!(T >= 0.0 && T <= f.horizon())) throw std::out_of_range("sup_pvar_over_time: T outside [0, horizon]");
  const int k = f.level();
  const IntervalCells cells = interval_cells(k, m);
  const std::int64_t a = std::max(cells.first, f.min_index());
  const std::int64_t b = std::min(cells.last, f.max_index());
  if (a > b) return 0.0;

  struct Event {
    double t;
    std::int64_t j;
  };
  std::vector<Event> events;
  for (std::int64_t j = a; j <= b; ++j) {
    for (double t : f.completion_times(j)) {
      if (t > T) break;
      events.push_back({t, j});
    }
  }
  std::sort(events.begin(), events.end(), [](const Event& x, const Event& y) { return x.t < y.t; });

  // Profile with a zero pad on each side where I_m extends past the range.
  const std::size_t pad_lo = cells.first < a ? 1 : 0;
  const std::size_t pad_hi = cells.last > b ? 1 : 0;
  std::vector<std::int64_t> profile(static_cast<std::size_t>(b - a + 1) + pad_lo + pad_hi, 0);
  std::vector<double> scratch;
  const double scale = std::ldexp(1.0, 1 - k);
  double best = 0.0;
  for (std::size_t i = 0; i < events.size();) {
    const double t = events[i].t;
    for (; i < events.size() && events[i].t == t; ++i) ++profile[static_cast<std::size_t>(events[i].j - a) + pad_lo];
    best = std::max(best, pvar_counts(profile, q, scale, scratch));
  }
  return best;
}

}  // namespace upcross
