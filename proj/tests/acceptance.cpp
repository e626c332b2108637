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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// fails. UPCROSS_ACCEPTANCE=1,3,7 restricts the run to the listed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "upcross/config.hpp"
#include "upcross/experiments.hpp"
#include "upcross/philox.hpp"
#include "upcross/pvariation.hpp"
#include "upcross/reference.hpp"
#include "upcross/stats.hpp"

namespace {

using namespace upcross;

constexpr std::uint64_t kSeed = 20161027;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string verdict_text(const ExperimentReport& r) {
  std::string out;
  for (const auto& v : r.verdicts) out += std::string(out.empty() ? "" : "; ") + (v.passed ? "" : "FAIL ") + v.name + ": " + v.detail;
  return out;
}

const ExitTimeLaw& law() {
  static const ExitTimeLaw l;
  return l;
}

Outcome exit_law_moments() {
  const ExitLawSelftest st = selftest_exit_law(law(), 1000000, kSeed);
  const double mean_tol = 4.0 * std::sqrt(2.0 / 3.0) / 1e3;
  const bool ok = std::abs(st.mean - 1.0) <= mean_tol && st.second_moment_ok;
  return {ok, "mean " + fmt("%.6f", st.mean) + " (tol " + fmt("%.5f", mean_tol) + "), E tau^2 " +
                  fmt("%.5f", st.second_moment) + " (tol " + fmt("%.5f", st.second_moment_tolerance) + ")"};
}

Outcome dual_series() {
  double gap = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double t = 0.3 + 0.4 * i / 99.0;
    gap = std::max(gap, std::abs(law().cdf_small_time(t) - law().cdf_large_time(t)));
  }
  return {gap <= 1e-10, "max gap " + fmt("%.3g", gap)};
}

Outcome levy_mean(unsigned threads) {
  const auto u = levy_sample(law(), DurationMode::exact, kSeed, 10, 1.0, 2000, threads);
  const Summary s = summarize(u);
  const double target = std::sqrt(2.0 / std::numbers::pi);
  // Optional: U^10(1, 0) against the half-normal law of |B_1|.
  const KsResult ks = ks_one_sample(u, [](double x) { return x <= 0 ? 0.0 : std::erf(x / std::numbers::sqrt2); });
  return {std::abs(s.mean - target) <= 0.045,
          "mean " + fmt("%.5f", s.mean) + " vs " + fmt("%.5f", target) + " (tol 0.045, stderr " +
              fmt("%.4f", s.stderr_) + "); half-normal KS p " + fmt("%.3g", ks.p_value) + " (informational)"};
}

std::vector<IdentityReport> identity_runs(unsigned threads) {
  std::vector<IdentityReport> out(100);
  parallel_for(out.size(), threads, [&](std::size_t i) {
    RngStream rng(kSeed, path_stream(0, i));
    const CrossingSkeleton fine = generate_skeleton(rng, law(), 10, 0.0, 0.5);
    out[i] = check_identities(fine, 4, 0.5);
  });
  return out;
}

Outcome identities(const std::vector<IdentityReport>& runs) {
  std::size_t idem = 0, subseq = 0, incr = 0, checks = 0;
  for (const auto& r : runs) {
    idem += r.idempotence_failures;
    subseq += r.subsequence_failures;
    incr += r.increment_failures;
    checks += r.checks;
  }
  return {idem + subseq + incr == 0, std::to_string(checks) + " checks; idempotence " + std::to_string(idem) +
                                         ", subsequence " + std::to_string(subseq) + ", increments " +
                                         std::to_string(incr) + " failures"};
}

Outcome subadditivity(const std::vector<IdentityReport>& runs) {
  std::size_t tested = 0, violations = 0, squared = 0;
  double excess = -INFINITY;
  for (const auto& r : runs) {
    tested += r.shift.tested;
    violations += r.shift.violations;
    squared += r.shift.squared_violations;
    excess = std::max(excess, r.shift.max_excess);
  }
  return {violations == 0, std::to_string(tested) + " crossing times, " + std::to_string(violations) +
                               " violations, max excess " + fmt("%.3g", excess) + "; squared form fails " +
                               fmt("%.2f%%", 100.0 * static_cast<double>(squared) / static_cast<double>(tested)) +
                               " (diagnostic)"};
}

Outcome pvar_dp() {
  RngStream rng(kSeed, path_stream(7, 0));
  std::size_t mismatches = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.next_u64() % 12;
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform() < 0.25 ? std::floor(5 * rng.uniform()) : 10.0 * rng.uniform() - 5.0;
    for (double q : {1.0, 2.0, 3.0}) {
      const double a = pvar_sequence(v, q).value;
      const double b = reference::pvar_enumerate(v, q);
      const double err = std::abs(a - b) / std::max(1.0, b);
      worst = std::max(worst, err);
      if (err > 1e-12) ++mismatches;
    }
  }
  return {mismatches == 0, "3000 cases, " + std::to_string(mismatches) + " mismatches, worst rel. error " +
                               fmt("%.2g", worst)};
}

ExperimentConfig base(unsigned threads) {
  ExperimentConfig c;
  c.master_seed = kSeed;
  c.levels = {2, 3, 4, 5, 6};
  c.proxy_offset = 6;
  c.threads = threads;
  return c;
}

Outcome sup_rate(unsigned threads) {
  ExperimentConfig c = base(threads);
  c.paths = 200;
  c.horizons = {1.0};
  const ExperimentReport r = run_sup_rate(c);
  return {r.passed(), verdict_text(r)};
}

Outcome lp_rate(unsigned threads) {
  ExperimentConfig c = base(threads);
  c.paths = 500;
  c.eta = 1.0;
  c.horizons = {0.5, 1.0, 2.0, 4.0};
  c.step_budget = 4e10;
  const ExperimentReport r = run_lp_rate(c);
  return {r.passed(), verdict_text(r)};
}

Outcome variation(unsigned threads) {
  ExperimentConfig c = base(threads);
  c.paths = 300;
  c.delta = 1.0;
  c.m = 1;
  c.horizons = {1.0};
  const ExperimentReport r = run_variation(c);
  std::string means;
  for (int k : c.levels) means += " " + std::to_string(k) + ":" + fmt("%.4g", r.row(k, 1.0, "sup_variation").mean);
  return {r.passed(), verdict_text(r) + "; means" + means};
}

Outcome scaling(unsigned threads) {
  ExperimentConfig c = base(threads);
  c.paths = 1000;
  c.levels = {5};
  c.lambda = 0.5;
  const ExperimentReport r = run_scaling_test(c);
  const double ma = r.row(5, 0.25, "F_over_lambda").median;
  const double mb = r.row(5, 0.5, "F").median;
  return {r.passed(), verdict_text(r) + "; medians " + fmt("%.4g", ma) + " vs " + fmt("%.4g", mb) + ", seed " +
                          std::to_string(kSeed)};
}

Outcome reproducibility() {
  ExperimentConfig c = base(1);
  c.paths = 24;
  c.levels = {2, 3, 4};
  c.proxy_offset = 4;
  c.horizons = {0.5, 1.0};
  std::vector<std::string> csv;
  for (unsigned t : {1u, 2u, 5u}) {
    c.threads = t;
    csv.push_back(to_csv(run_sup_rate(c)) + to_csv(run_variation(c)) + to_csv(run_scaling_test(c)) +
                  to_csv(run_subadditivity(c)));
  }
  const bool same = csv[0] == csv[1] && csv[0] == csv[2];
  return {same, "sup-rate, variation, scaling-test and subadditivity CSV at 1, 2 and 5 threads " +
                    std::string(same ? "identical" : "DIFFER")};
}

}  // namespace

int main() {
  std::set<int> only;
  if (const char* sel = std::getenv("UPCROSS_ACCEPTANCE")) {
    std::stringstream ss(sel);
    std::string item;
    while (std::getline(ss, item, ',')) only.insert(std::stoi(item));
  }
  const unsigned threads = resolve_threads(0);
  std::vector<IdentityReport> id_runs;
  auto ids = [&]() -> const std::vector<IdentityReport>& {
    if (id_runs.empty()) id_runs = identity_runs(threads);
    return id_runs;
  };

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exit-law moments (10^6 samples)", exit_law_moments},
      {"dual-series agreement on [0.3, 0.7]", dual_series},
      {"Levy mean U^10(1,0), N=2000", [&] { return levy_mean(threads); }},
      {"exact identities, 100 paths K=10 T=0.5", [&] { return identities(ids()); }},
      {"square-root subadditivity, k=4 K=10 T=0.5", [&] { return subadditivity(ids()); }},
      {"p-variation DP vs enumeration", pvar_dp},
      {"sup-rate trend k=2..6, N=200", [&] { return sup_rate(threads); }},
      {"L^p bound eta=1, T in {0.5,1,2,4}, N=500", [&] { return lp_rate(threads); }},
      {"variation bound delta=1 m=1, N=300", [&] { return variation(threads); }},
      {"scaling identity lambda=0.5 k=5, N=1000", [&] { return scaling(threads); }},
      {"reproducibility across thread counts", reproducibility},
  };

  std::printf("acceptance: seed %llu, %u thread(s)\n", static_cast<unsigned long long>(kSeed), threads);
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %s  %s  [%.1f s]  %s\n", id, o.passed ? "PASS" : "FAIL", criteria[i].first.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.passed) ++failures;
  }
  std::printf("%d criterion failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
