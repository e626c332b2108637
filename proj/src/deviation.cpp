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

#include "upcross/deviation.hpp"

#include <algorithm>
#include <stdexcept>

namespace upcross {

double normalizer(int level, double log_base) {
  if (level < 1) throw std::invalid_argument("normalizer: level must be >= 1");
  if (!(log_base > 0.0) || log_base == 1.0) throw std::invalid_argument("normalizer: invalid log base");
  const double log_2k = level * std::numbers::ln2 / std::log(log_base);
  return std::sqrt(std::ldexp(1.0, -level) * log_2k);
}

double LocalTimeProxy::sup_value(double t) const {
  std::size_t best = 0;
  for (std::int64_t j = field_.min_index(); j <= field_.max_index(); ++j) {
    best = std::max(best, field_.upcrossings_before(j, t));
  }
  return std::ldexp(static_cast<double>(best), 1 - field_.level());
}

LocalTimeProxy build_proxy(UpcrossingField fine_field) { return LocalTimeProxy(std::move(fine_field)); }

DeviationStatistics make_statistics(int level, int proxy_level, double horizon, double sup_deviation,
                                    double local_time_sup, double log_base) {
  DeviationStatistics st;
  st.level = level;
  st.proxy_level = proxy_level;
  st.horizon = horizon;
  st.sup_deviation = sup_deviation;
  st.normalizer = normalizer(level, log_base);
  st.rate_statistic = sup_deviation / st.normalizer;
  st.local_time_sup = local_time_sup;
  st.centered_statistic = st.rate_statistic - 2.0 * std::sqrt(local_time_sup);
  st.f_statistic = st.rate_statistic * st.rate_statistic;
  return st;
}

DeviationStatistics sup_deviation(const UpcrossingField& coarse, const LocalTimeProxy& proxy, double T,
                                  double log_base) {
  const UpcrossingField& fine = proxy.field();
  const int k = coarse.level();
  const int K = fine.level();
  if (k > K) throw std::invalid_argument("sup_deviation: coarse level exceeds the proxy level");
  if (coarse.start_value() != fine.start_value() || coarse.horizon() != fine.horizon()) {
    throw std::invalid_argument("sup_deviation: fields come from different paths");
  }
  if (!(T >= 0.0 && T <= fine.horizon())) throw std::out_of_range("sup_deviation: T outside [0, horizon]");
  const int shift = K - k;

  struct Event {
    double t;
    bool coarse;
    std::int64_t j;
  };
  std::vector<Event> events;
  auto collect = [&](const UpcrossingField& f, bool is_coarse) {
    for (std::int64_t j = f.min_index(); j <= f.max_index(); ++j) {
      for (double t : f.completion_times(j)) {
        if (t > T) break;
        events.push_back({t, is_coarse, j});
      }
    }
  };
  collect(fine, false);
  collect(coarse, true);
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.t < b.t; });

  std::vector<std::int64_t> fine_counts(static_cast<std::size_t>(fine.max_index() - fine.min_index() + 1), 0);
  std::vector<std::int64_t> coarse_counts(static_cast<std::size_t>(coarse.max_index() - coarse.min_index() + 1), 0);
  auto fine_count = [&](std::int64_t j) -> std::int64_t {
    return (j < fine.min_index() || j > fine.max_index()) ? 0 : fine_counts[static_cast<std::size_t>(j - fine.min_index())];
  };
  auto coarse_count = [&](std::int64_t j) -> std::int64_t {
    return (j < coarse.min_index() || j > coarse.max_index()) ? 0
                                                              : coarse_counts[static_cast<std::size_t>(j - coarse.min_index())];
  };

  std::int64_t max_gap = 0;
  std::vector<std::int64_t> touched;
  for (std::size_t i = 0; i < events.size();) {
    const double t = events[i].t;
    touched.clear();
    for (; i < events.size() && events[i].t == t; ++i) {
      const Event& e = events[i];
      if (e.coarse) {
        ++coarse_counts[static_cast<std::size_t>(e.j - coarse.min_index())];
        const std::int64_t top = e.j << shift;
        for (std::int64_t jf = top - (std::int64_t{1} << shift) + 1; jf <= top; ++jf) touched.push_back(jf);
      } else {
        ++fine_counts[static_cast<std::size_t>(e.j - fine.min_index())];
        touched.push_back(e.j);
      }
    }
    for (std::int64_t jf : touched) {
      const std::int64_t jc = (jf + (std::int64_t{1} << shift) - 1) >> shift;
      const std::int64_t gap = (coarse_count(jc) << shift) - fine_count(jf);
      max_gap = std::max(max_gap, gap < 0 ? -gap : gap);
    }
  }
  const std::int64_t top_count = fine_counts.empty() ? 0 : *std::max_element(fine_counts.begin(), fine_counts.end());
  return make_statistics(k, K, T, std::ldexp(static_cast<double>(max_gap), 1 - K),
                         std::ldexp(static_cast<double>(top_count), 1 - K), log_base);
}

SupDeviationTracker::SupDeviationTracker(int coarse_level, int proxy_level)
    : coarse_(coarse_level), proxy_(proxy_level), shift_(proxy_level - coarse_level) {
  if (coarse_level < 0 || shift_ < 0) throw std::invalid_argument("SupDeviationTracker: need coarse <= proxy level");
}

double sup_deviation_path(const CrossingSkeleton& fine, int coarse_level, double T) {
  LevelLadder ladder(fine.level(), coarse_level, fine.start_units());
  SupDeviationTracker tracker(coarse_level, fine.level());
  const auto times = fine.times();
  const auto signs = fine.signs();
  for (std::size_t i = 0; i < times.size() && times[i] <= T; ++i) {
    tracker.after_step(ladder, ladder.step(signs[i]));
  }
  return tracker.sup_deviation();
}

namespace {

struct PathSnapshot {
  double sup_deviation = 0.0;
  std::vector<CellCounts> counts;  // levels k..K
};

PathSnapshot snapshot(const LevelLadder& ladder, const SupDeviationTracker& tracker) {
  PathSnapshot s;
  s.sup_deviation = tracker.sup_deviation();
  for (int l = ladder.coarsest_level(); l <= ladder.fine_level(); ++l) s.counts.push_back(ladder.counts(l));
  return s;
}

// Streams fine steps with time <= T; returns the final snapshot.
PathSnapshot stream_path(const CrossingSkeleton& fine, int coarse_level, double T) {
  LevelLadder ladder(fine.level(), coarse_level, fine.start_units());
  SupDeviationTracker tracker(coarse_level, fine.level());
  const auto times = fine.times();
  const auto signs = fine.signs();
  for (std::size_t i = 0; i < times.size() && times[i] <= T; ++i) tracker.after_step(ladder, ladder.step(signs[i]));
  return snapshot(ladder, tracker);
}

}  // namespace

SubadditivityReport subadditivity_check(const CrossingSkeleton& fine, int coarse_level, double T,
                                        std::span<const std::size_t> coarse_indices) {
  const int K = fine.level();
  if (coarse_level > K || coarse_level < 0) throw std::invalid_argument("subadditivity_check: bad coarse level");
  if (!(T >= 0.0 && T <= fine.horizon())) throw std::out_of_range("subadditivity_check: T outside [0, horizon]");
  const CrossingSkeleton coarse = coarsen(fine, coarse_level);

  std::vector<std::size_t> wanted(coarse_indices.begin(), coarse_indices.end());
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
  std::erase_if(wanted, [&](std::size_t n) { return n > coarse.step_count() || coarse.time(n) > T; });

  // One pass over the original path, snapshotting at the wanted coarse indices.
  std::vector<PathSnapshot> snaps;
  std::vector<std::size_t> fine_index;
  LevelLadder ladder(K, coarse_level, fine.start_units());
  SupDeviationTracker tracker(coarse_level, K);
  std::size_t coarse_n = 0;
  auto want = wanted.begin();
  if (want != wanted.end() && *want == 0) {
    snaps.push_back(snapshot(ladder, tracker));
    fine_index.push_back(0);
    ++want;
  }
  const auto times = fine.times();
  const auto signs = fine.signs();
  for (std::size_t i = 0; i < times.size() && times[i] <= T; ++i) {
    const int lowest = ladder.step(signs[i]);
    tracker.after_step(ladder, lowest);
    if (lowest <= coarse_level) {
      ++coarse_n;
      if (want != wanted.end() && *want == coarse_n) {
        snaps.push_back(snapshot(ladder, tracker));
        fine_index.push_back(i + 1);
        ++want;
      }
    }
  }
  const PathSnapshot final_state = snapshot(ladder, tracker);
  const double d_total = final_state.sup_deviation;

  SubadditivityReport report;
  for (std::size_t w = 0; w < snaps.size(); ++w) {
    const std::size_t n = fine_index[w];
    const CrossingSkeleton tail = shift_tail(fine, n);
    const PathSnapshot shifted = stream_path(tail, coarse_level, T - fine.time(n));
    ++report.tested;

    for (std::size_t l = 0; l < final_state.counts.size(); ++l) {
      const CellCounts& a = final_state.counts[l];
      const CellCounts& b = snaps[w].counts[l];
      const CellCounts& c = shifted.counts[l];
      const std::int64_t lo = std::min({a.first_index(), b.first_index(), c.first_index()});
      const std::int64_t hi = std::max({a.end_index(), b.end_index(), c.end_index()});
      for (std::int64_t j = lo; j < hi; ++j) {
        if (a.get(j) - b.get(j) != c.get(j)) ++report.increment_violations;
      }
    }

    const double d_s = snaps[w].sup_deviation;
    const double d_shift = shifted.sup_deviation;
    const double excess = d_total - (d_s + d_shift);
    report.max_excess = std::max(report.max_excess, excess);
    if (excess > 1e-12) ++report.violations;
    if (d_total * d_total > d_s * d_s + d_shift * d_shift + 1e-12) ++report.squared_violations;
  }
  return report;
}

SubadditivityReport subadditivity_check(const CrossingSkeleton& fine, int coarse_level, double T) {
  const CrossingSkeleton coarse = coarsen(fine, coarse_level);
  std::vector<std::size_t> all;
  for (std::size_t n = 0; n <= coarse.step_count() && coarse.time(n) <= T; ++n) all.push_back(n);
  return subadditivity_check(fine, coarse_level, T, all);
}

}  // namespace upcross
