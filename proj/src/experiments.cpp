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

#include "upcross/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

#include "upcross/deviation.hpp"
#include "upcross/level_ladder.hpp"
#include "upcross/philox.hpp"
#include "upcross/pvariation.hpp"
#include "upcross/reference.hpp"
#include "upcross/stats.hpp"
#include "upcross/upcrossing_field.hpp"

namespace upcross {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void check_budget(double projected, const ExperimentConfig& c) {
  if (projected <= c.step_budget) return;
  throw BudgetError("projected " + g(projected) + " fine steps exceeds the step budget of " + g(c.step_budget) +
                    "; reduce paths, the top level, proxy-offset or the largest horizon (each level adds 4x), or "
                    "raise --step-budget");
}

ExperimentReport start_report(const std::string& name, const ExperimentConfig& c) {
  ExperimentReport r;
  r.experiment = name;
  r.config_echo = c.echo();
  return r;
}

double max_horizon(const ExperimentConfig& c) { return c.horizons.back(); }

double pow4(int level) { return std::ldexp(1.0, 2 * level); }

/// Per-path deviation samples for every (level, horizon), gathered in path order.
std::vector<PathDeviations> deviation_paths(const ExperimentConfig& c, const ExitTimeLaw& law,
                                            std::uint64_t sample, std::span<const double> horizons) {
  std::vector<PathDeviations> out(c.paths);
  parallel_for(c.paths, resolve_threads(c.threads), [&](std::size_t i) {
    out[i] = simulate_path_deviations(law, c.mode, c.master_seed, path_stream(sample, i), c.levels, c.proxy_offset,
                                      horizons);
  });
  return out;
}

std::vector<double> column(const std::vector<std::vector<double>>& per_path, std::size_t slot) {
  std::vector<double> v(per_path.size());
  for (std::size_t i = 0; i < per_path.size(); ++i) v[i] = per_path[i][slot];
  return v;
}

struct DeviationSamples {
  std::vector<double> D, lstar, R, two_sqrt_lstar, centered_abs;
};

DeviationSamples deviation_samples(const std::vector<PathDeviations>& paths, std::size_t slot, int k,
                                   double log_base) {
  DeviationSamples s;
  const double nu = normalizer(k, log_base);
  for (const auto& p : paths) {
    const double d = p.sup_deviation[slot];
    const double l = p.local_time_sup[slot];
    s.D.push_back(d);
    s.lstar.push_back(l);
    s.R.push_back(d / nu);
    s.two_sqrt_lstar.push_back(2.0 * std::sqrt(l));
    s.centered_abs.push_back(std::abs(d / nu - 2.0 * std::sqrt(l)));
  }
  return s;
}

const ExitTimeLaw& shared_law() {
  static const ExitTimeLaw law;
  return law;
}

}  // namespace

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

PathDeviations simulate_path_deviations(const ExitTimeLaw& law, DurationMode mode, std::uint64_t seed,
                                        std::uint64_t stream, std::span<const int> levels, int proxy_offset,
                                        std::span<const double> horizons) {
  struct Observer {
    std::vector<SupDeviationTracker> trackers;
    PathDeviations* out;
    std::size_t n_horizons;
    void after_step(const LevelLadder& ladder, int lowest, double) {
      for (auto& tr : trackers) tr.after_step(ladder, lowest);
    }
    void checkpoint(std::size_t i, const LevelLadder& ladder) {
      for (std::size_t a = 0; a < trackers.size(); ++a) {
        out->sup_deviation[a * n_horizons + i] = trackers[a].sup_deviation();
        out->local_time_sup[a * n_horizons + i] = trackers[a].local_time_sup(ladder);
      }
    }
  };
  PathDeviations result;
  result.sup_deviation.assign(levels.size() * horizons.size(), 0.0);
  result.local_time_sup.assign(levels.size() * horizons.size(), 0.0);
  Observer obs{{}, &result, horizons.size()};
  for (int k : levels) obs.trackers.emplace_back(k, k + proxy_offset);
  LevelLadder ladder(levels.back() + proxy_offset, levels.front());
  RngStream rng(seed, stream);
  run_ladder_path(rng, law, mode, ladder, horizons, obs);
  return result;
}

std::vector<double> simulate_path_variation(const ExitTimeLaw& law, DurationMode mode, std::uint64_t seed,
                                            std::uint64_t stream, std::span<const int> levels, double q, int m,
                                            std::span<const double> horizons) {
  struct Track {
    int level;
    IntervalCells cells;
    double scale;
    double best = 0.0;
  };
  struct Observer {
    std::vector<Track> tracks;
    std::vector<double>* out;
    std::size_t n_horizons;
    double q;
    std::vector<std::int64_t> profile;
    std::vector<double> scratch;

    void after_step(const LevelLadder& ladder, int lowest, double) {
      for (auto& tr : tracks) {
        if (lowest > tr.level || !ladder.last_step_up(tr.level)) continue;
        const std::int64_t j = ladder.value(tr.level);
        if (j < tr.cells.first || j > tr.cells.last) continue;
        // Cells outside the allocated window hold 0; one zero pad stands for each such run.
        const CellCounts& counts = ladder.counts(tr.level);
        const std::int64_t a = std::max(tr.cells.first, counts.first_index());
        const std::int64_t b = std::min(tr.cells.last, counts.end_index() - 1);
        profile.clear();
        if (tr.cells.first < a) profile.push_back(0);
        for (std::int64_t c = a; c <= b; ++c) profile.push_back(counts.get(c));
        if (tr.cells.last > b) profile.push_back(0);
        tr.best = std::max(tr.best, pvar_counts(profile, q, tr.scale, scratch));
      }
    }
    void checkpoint(std::size_t i, const LevelLadder&) {
      for (std::size_t a = 0; a < tracks.size(); ++a) (*out)[a * n_horizons + i] = tracks[a].best;
    }
  };
  std::vector<double> result(levels.size() * horizons.size(), 0.0);
  Observer obs{{}, &result, horizons.size(), q, {}, {}};
  for (int k : levels) obs.tracks.push_back({k, interval_cells(k, m), std::ldexp(1.0, 1 - k)});
  LevelLadder ladder(levels.back(), levels.front());
  RngStream rng(seed, stream);
  run_ladder_path(rng, law, mode, ladder, horizons, obs);
  return result;
}

std::vector<double> levy_sample(const ExitTimeLaw& law, DurationMode mode, std::uint64_t seed, int level, double T,
                                std::size_t paths, unsigned threads) {
  std::vector<double> out(paths);
  parallel_for(paths, threads, [&](std::size_t i) {
    RngStream rng(seed, path_stream(kLevySample, i));
    std::int64_t position = 0;
    std::int64_t count = 0;
    stream_steps(rng, law, level, T, mode, [&](double t, int sign) {
      position += sign;
      if (t <= T && sign > 0 && position == 0) ++count;
    });
    out[i] = std::ldexp(static_cast<double>(count), 1 - level);
  });
  return out;
}

IdentityReport check_identities(const CrossingSkeleton& fine, int coarse_level, double T) {
  IdentityReport r;
  const int K = fine.level();
  for (int a = K; a >= 1; --a) {
    const CrossingSkeleton mid = coarsen(fine, a);
    // Subsequence: every level-a crossing time is a fine crossing time.
    const auto ft = fine.times();
    std::size_t pos = 0;
    for (double t : mid.times()) {
      ++r.checks;
      while (pos < ft.size() && ft[pos] < t) ++pos;
      if (pos == ft.size() || ft[pos] != t) ++r.subsequence_failures;
    }
    for (int b = a - 1; b >= std::max(1, a - 3); --b) {
      ++r.checks;
      if (!(coarsen(mid, b) == coarsen(fine, b))) ++r.idempotence_failures;
    }
  }
  ++r.checks;
  if (!(coarsen(fine, K) == fine)) ++r.idempotence_failures;
  const SubadditivityReport sub = subadditivity_check(fine, coarse_level, T);
  r.shift = sub;
  r.checks += sub.tested;
  r.increment_failures += sub.increment_violations;
  r.subadditivity_failures += sub.violations;
  return r;
}

double projected_steps_deviation(const ExperimentConfig& c) {
  return static_cast<double>(c.paths) * max_horizon(c) * pow4(c.levels.back() + c.proxy_offset);
}

double projected_steps_variation(const ExperimentConfig& c) {
  return static_cast<double>(c.paths) * max_horizon(c) * pow4(c.levels.back());
}

double projected_steps_scaling(const ExperimentConfig& c) {
  return static_cast<double>(c.paths) * (c.lambda + c.lambda * c.lambda) * pow4(c.levels.back() + c.proxy_offset);
}

double projected_steps_subadditivity(const ExperimentConfig& c) {
  // One fine pass, then on average half a pass per coarse crossing time.
  const double T = max_horizon(c);
  double restarts = 0.0;
  for (int k : c.levels) restarts += 0.5 * T * pow4(k);
  return static_cast<double>(c.paths) * T * pow4(c.levels.back() + c.proxy_offset) * (1.0 + restarts);
}

ExperimentReport run_sup_rate(const ExperimentConfig& c) {
  c.validate();
  check_budget(projected_steps_deviation(c), c);
  const auto t0 = Clock::now();
  ExperimentReport report = start_report("sup-rate", c);
  const auto paths = deviation_paths(c, shared_law(), 0, c.horizons);
  const std::size_t nT = c.horizons.size();
  for (std::size_t a = 0; a < c.levels.size(); ++a) {
    const int k = c.levels[a];
    for (std::size_t b = 0; b < nT; ++b) {
      const double T = c.horizons[b];
      const DeviationSamples s = deviation_samples(paths, a * nT + b, k, c.log_base);
      report.rows.push_back(make_row("sup-rate", k, T, "D", s.D, c.master_seed));
      report.rows.push_back(make_row("sup-rate", k, T, "local_time_sup", s.lstar, c.master_seed));
      report.rows.push_back(make_row("sup-rate", k, T, "R", s.R, c.master_seed));
      report.rows.push_back(make_row("sup-rate", k, T, "two_sqrt_local_time_sup", s.two_sqrt_lstar, c.master_seed));
      report.rows.push_back(make_row("sup-rate", k, T, "centered_abs", s.centered_abs, c.master_seed));
      const double denom = quantile_of(s.two_sqrt_lstar, 0.5);
      const double rel = denom > 0.0 ? quantile_of(s.centered_abs, 0.5) / denom : 0.0;
      report.rows.push_back(scalar_row("sup-rate", k, T, "relative_error", rel, c.paths, c.master_seed));
    }
  }
  for (double T : c.horizons) {
    bool decreasing = true;
    std::string detail = "median |R - 2 sqrt(l*)| by k:";
    double prev = INFINITY;
    for (int k : c.levels) {
      const double med = report.row(k, T, "centered_abs").median;
      detail += " " + std::to_string(k) + ":" + g(med);
      decreasing = decreasing && med < prev;
      prev = med;
    }
    report.verdicts.push_back({"trend T=" + g(T), decreasing, detail});
    const double rel = report.row(c.levels.back(), T, "relative_error").mean;
    report.verdicts.push_back({"relative_error T=" + g(T), rel <= 0.35,
                               "k=" + std::to_string(c.levels.back()) + " relative error " + g(rel) + " (cap 0.35)"});
  }
  report.wall_seconds = seconds_since(t0);
  return report;
}

ExperimentReport run_lp_rate(const ExperimentConfig& c) {
  c.validate();
  check_budget(projected_steps_deviation(c), c);
  const auto t0 = Clock::now();
  ExperimentReport report = start_report("lp-rate", c);
  const auto paths = deviation_paths(c, shared_law(), 0, c.horizons);
  const std::size_t nT = c.horizons.size();
  const double p = 2.0 + c.eta;
  const double growth = 0.5 + c.eta / 4.0;
  for (std::size_t a = 0; a < c.levels.size(); ++a) {
    const int k = c.levels[a];
    for (std::size_t b = 0; b < nT; ++b) {
      const double T = c.horizons[b];
      const DeviationSamples s = deviation_samples(paths, a * nT + b, k, c.log_base);
      std::vector<double> moment(s.R.size());
      std::vector<double> normalized(s.R.size());
      for (std::size_t i = 0; i < s.R.size(); ++i) {
        moment[i] = std::pow(s.R[i], p);
        normalized[i] = moment[i] / std::pow(T, growth);
      }
      report.rows.push_back(make_row("lp-rate", k, T, "R", s.R, c.master_seed));
      report.rows.push_back(make_row("lp-rate", k, T, "moment", moment, c.master_seed));
      report.rows.push_back(make_row("lp-rate", k, T, "normalized_moment", normalized, c.master_seed));
    }
  }
  // (a) uniform in k at each T.
  for (double T : c.horizons) {
    double lo = INFINITY;
    double hi = 0.0;
    for (int k : c.levels) {
      const double est = report.row(k, T, "moment").mean;
      lo = std::min(lo, est);
      hi = std::max(hi, est);
    }
    report.verdicts.push_back({"uniform_in_k T=" + g(T), hi <= 2.0 * lo,
                               "max/min over k of the moment estimate " + g(hi / lo) + " (cap 2)"});
  }
  // (b) growth in T at each k.
  if (nT >= 2) {
    std::vector<double> logT;
    for (double T : c.horizons) logT.push_back(std::log(T));
    for (int k : c.levels) {
      std::vector<double> logm;
      for (double T : c.horizons) logm.push_back(std::log(report.row(k, T, "moment").mean));
      const double slope = ols_slope(logT, logm);
      report.rows.push_back(scalar_row("lp-rate", k, 0.0, "loglog_slope", slope, c.paths, c.master_seed));
      report.verdicts.push_back({"slope k=" + std::to_string(k), slope <= growth + 0.15,
                                 "log-log slope " + g(slope) + " (cap " + g(growth + 0.15) + ")"});
    }
  }
  report.wall_seconds = seconds_since(t0);
  return report;
}

ExperimentReport run_variation(const ExperimentConfig& c) {
  c.validate();
  check_budget(projected_steps_variation(c), c);
  const auto t0 = Clock::now();
  ExperimentReport report = start_report("variation", c);
  const double q = 2.0 + c.delta;
  std::vector<std::vector<double>> per_path(c.paths);
  parallel_for(c.paths, resolve_threads(c.threads), [&](std::size_t i) {
    per_path[i] = simulate_path_variation(shared_law(), c.mode, c.master_seed, path_stream(0, i), c.levels, q, c.m,
                                          c.horizons);
  });
  const std::size_t nT = c.horizons.size();
  for (std::size_t a = 0; a < c.levels.size(); ++a) {
    for (std::size_t b = 0; b < nT; ++b) {
      report.rows.push_back(make_row("variation", c.levels[a], c.horizons[b], "sup_variation",
                                     column(per_path, a * nT + b), c.master_seed));
    }
  }
  for (double T : c.horizons) {
    double lo = INFINITY;
    double hi = 0.0;
    for (int k : c.levels) {
      const double est = report.row(k, T, "sup_variation").mean;
      lo = std::min(lo, est);
      hi = std::max(hi, est);
    }
    report.verdicts.push_back({"bounded_in_k T=" + g(T), hi <= 2.0 * lo,
                               "max/min over k of the variation estimate " + g(hi / lo) + " (cap 2)"});
  }
  report.wall_seconds = seconds_since(t0);
  return report;
}

ExperimentReport run_scaling_test(const ExperimentConfig& c) {
  c.validate();
  check_budget(projected_steps_scaling(c), c);
  const auto t0 = Clock::now();
  ExperimentReport report = start_report("scaling-test", c);
  const double lam = c.lambda;
  const std::vector<double> hA{lam * lam};
  const std::vector<double> hB{lam};
  const auto A = deviation_paths(c, shared_law(), kScalingSampleA, hA);
  const auto B = deviation_paths(c, shared_law(), kScalingSampleB, hB);
  for (std::size_t a = 0; a < c.levels.size(); ++a) {
    const int k = c.levels[a];
    const DeviationSamples sa = deviation_samples(A, a, k, c.log_base);
    const DeviationSamples sb = deviation_samples(B, a, k, c.log_base);
    std::vector<double> fa(sa.R.size());
    std::vector<double> fb(sb.R.size());
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] = sa.R[i] * sa.R[i] / lam;
    for (std::size_t i = 0; i < fb.size(); ++i) fb[i] = sb.R[i] * sb.R[i];
    report.rows.push_back(make_row("scaling-test", k, lam * lam, "F_over_lambda", fa, c.master_seed));
    report.rows.push_back(make_row("scaling-test", k, lam, "F", fb, c.master_seed));
    const KsResult ks = ks_two_sample(fa, fb);
    report.rows.push_back(scalar_row("scaling-test", k, 0.0, "ks_statistic", ks.statistic, c.paths, c.master_seed));
    report.rows.push_back(scalar_row("scaling-test", k, 0.0, "ks_p_value", ks.p_value, c.paths, c.master_seed));
    report.verdicts.push_back({"ks k=" + std::to_string(k), ks.p_value > 0.01,
                               "D=" + g(ks.statistic) + " p=" + g(ks.p_value) + " (need p > 0.01)"});
  }
  report.wall_seconds = seconds_since(t0);
  return report;
}

ExperimentReport run_subadditivity(const ExperimentConfig& c) {
  c.validate();
  check_budget(projected_steps_subadditivity(c), c);
  const auto t0 = Clock::now();
  ExperimentReport report = start_report("subadditivity", c);
  const std::size_t nk = c.levels.size();
  const std::size_t nT = c.horizons.size();
  const int top = c.levels.back() + c.proxy_offset;
  std::vector<std::vector<SubadditivityReport>> per_path(c.paths);
  parallel_for(c.paths, resolve_threads(c.threads), [&](std::size_t i) {
    RngStream rng(c.master_seed, path_stream(0, i));
    const CrossingSkeleton fine = generate_skeleton(rng, shared_law(), top, 0.0, max_horizon(c), c.mode);
    auto& out = per_path[i];
    out.resize(nk * nT);
    for (std::size_t a = 0; a < nk; ++a) {
      const int k = c.levels[a];
      const CrossingSkeleton ref = coarsen(fine, k + c.proxy_offset);
      for (std::size_t b = 0; b < nT; ++b) out[a * nT + b] = subadditivity_check(ref, k, c.horizons[b]);
    }
  });
  std::size_t violations = 0;
  std::size_t increments = 0;
  for (std::size_t a = 0; a < nk; ++a) {
    for (std::size_t b = 0; b < nT; ++b) {
      std::vector<double> tested, viol, incr, sq_rate, excess;
      for (const auto& p : per_path) {
        const SubadditivityReport& r = p[a * nT + b];
        tested.push_back(static_cast<double>(r.tested));
        viol.push_back(static_cast<double>(r.violations));
        incr.push_back(static_cast<double>(r.increment_violations));
        sq_rate.push_back(r.tested ? static_cast<double>(r.squared_violations) / static_cast<double>(r.tested) : 0.0);
        excess.push_back(r.max_excess);
        violations += r.violations;
        increments += r.increment_violations;
      }
      const int k = c.levels[a];
      const double T = c.horizons[b];
      report.rows.push_back(make_row("subadditivity", k, T, "tested", tested, c.master_seed));
      report.rows.push_back(make_row("subadditivity", k, T, "violations", viol, c.master_seed));
      report.rows.push_back(make_row("subadditivity", k, T, "increment_violations", incr, c.master_seed));
      report.rows.push_back(make_row("subadditivity", k, T, "squared_violation_rate", sq_rate, c.master_seed));
      report.rows.push_back(make_row("subadditivity", k, T, "max_excess", excess, c.master_seed));
    }
  }
  report.verdicts.push_back({"square_root_form", violations == 0, std::to_string(violations) + " violations"});
  report.verdicts.push_back({"increments", increments == 0, std::to_string(increments) + " increment mismatches"});
  report.wall_seconds = seconds_since(t0);
  return report;
}

ExperimentReport run_selftest_exit_law(const ExperimentConfig& c, std::size_t samples) {
  const auto t0 = Clock::now();
  ExperimentReport report = start_report("selftest-exit-law", c);
  const ExitLawSelftest st = selftest_exit_law(shared_law(), samples, c.master_seed);
  report.rows.push_back(scalar_row("selftest-exit-law", 0, 1.0, "mean", st.mean, samples, c.master_seed));
  report.rows.push_back(scalar_row("selftest-exit-law", 0, 1.0, "second_moment", st.second_moment, samples,
                                   c.master_seed));
  report.rows.push_back(scalar_row("selftest-exit-law", 0, 0.0, "max_series_gap", st.max_series_gap, samples,
                                   c.master_seed));
  report.verdicts.push_back({"mean", st.mean_ok, "|mean - 1| = " + g(std::abs(st.mean - 1.0)) + " (tolerance " +
                                                     g(st.mean_tolerance) + ")"});
  report.verdicts.push_back({"second_moment", st.second_moment_ok,
                             "|m2 - 5/3| = " + g(std::abs(st.second_moment - 5.0 / 3.0)) + " (tolerance " +
                                 g(st.second_moment_tolerance) + ")"});
  report.verdicts.push_back({"series_agreement", st.series_ok, "max gap " + g(st.max_series_gap)});
  report.wall_seconds = seconds_since(t0);
  return report;
}

ExperimentReport run_selftest(const ExperimentConfig& c) {
  if (c.paths < 1) throw std::invalid_argument("selftest needs paths >= 1");
  const auto t0 = Clock::now();
  ExperimentReport report = start_report("selftest", c);
  const unsigned threads = resolve_threads(c.threads);

  if (c.mode == DurationMode::exact) {
    const ExperimentReport law = run_selftest_exit_law(c, 100000);
    for (const auto& r : law.rows) report.rows.push_back(r);
    for (auto v : law.verdicts) {
      v.name = "exit_law_" + v.name;
      report.verdicts.push_back(v);
    }
  } else {
    report.verdicts.push_back({"exit_law", true, "skipped in deterministic-durations mode"});
  }

  // Levy: U^k(1, 0) has mean sqrt(2/pi) up to O(2^-k) walk bias.
  constexpr int kLevyLevel = 8;
  const auto levy = levy_sample(shared_law(), c.mode, c.master_seed, kLevyLevel, 1.0, c.paths, threads);
  const ReportRow lr = make_row("selftest", kLevyLevel, 1.0, "levy_U_at_0", levy, c.master_seed);
  report.rows.push_back(lr);
  const double target = std::sqrt(2.0 / std::numbers::pi);
  const double tol = 4.0 * lr.stderr_ + std::ldexp(1.0, 2 - kLevyLevel);
  report.verdicts.push_back({"levy_mean", std::abs(lr.mean - target) <= tol,
                             "mean " + g(lr.mean) + " vs " + g(target) + " (tolerance " + g(tol) + ")"});

  // DP against enumeration.
  std::size_t mismatches = 0;
  RngStream rng(c.master_seed, path_stream(5, 0));
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.next_u64() % 10;
    std::vector<double> v(n);
    for (double& x : v) x = static_cast<double>(rng.next_u64() % 9) - 4.0 + (rng.uniform() < 0.5 ? 0.0 : rng.uniform());
    for (double q : {1.0, 2.0, 3.0}) {
      const double fast = pvar_sequence(v, q).value;
      const double slow = reference::pvar_enumerate(v, q);
      if (std::abs(fast - slow) > 1e-12 * std::max(1.0, slow)) ++mismatches;
    }
  }
  report.verdicts.push_back({"pvar_dp", mismatches == 0, std::to_string(mismatches) + " mismatches in 900 cases"});

  // Exact identities on short paths.
  const std::size_t n_id = std::min<std::size_t>(c.paths, 20);
  std::vector<IdentityReport> ids(n_id);
  parallel_for(n_id, threads, [&](std::size_t i) {
    RngStream path_rng(c.master_seed, path_stream(6, i));
    const CrossingSkeleton fine = generate_skeleton(path_rng, shared_law(), 8, 0.0, 0.25, c.mode);
    ids[i] = check_identities(fine, 4, 0.25);
  });
  std::size_t failures = 0;
  std::size_t checks = 0;
  for (const auto& r : ids) {
    failures += r.failures();
    checks += r.checks;
  }
  report.verdicts.push_back({"identities", failures == 0,
                             std::to_string(failures) + " failures in " + std::to_string(checks) + " checks"});
  report.wall_seconds = seconds_since(t0);
  return report;
}

}  // namespace upcross
