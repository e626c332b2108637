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

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>

#include "json.hpp"
#include "upcross/deviation.hpp"
#include "upcross/philox.hpp"
#include "upcross/pvariation.hpp"
#include "upcross/upcrossing_field.hpp"

namespace upcross {
namespace {

const ExitTimeLaw& law() {
  static const ExitTimeLaw l;
  return l;
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.paths = 6;
  c.levels = {2, 3, 4};
  c.proxy_offset = 3;
  c.horizons = {0.25, 0.5};
  c.threads = 1;
  return c;
}

TEST(Config, ParsesLevelsAndHorizons) {
  EXPECT_EQ(parse_levels("2..4,7"), (std::vector<int>{2, 3, 4, 7}));
  EXPECT_EQ(parse_levels("6,2,2"), (std::vector<int>{2, 6}));
  EXPECT_THROW(parse_levels("5..3"), std::invalid_argument);
  EXPECT_THROW(parse_levels("x"), std::invalid_argument);
  EXPECT_EQ(parse_doubles("0.5, 1,2"), (std::vector<double>{0.5, 1, 2}));
}

TEST(Config, TextFileSettings) {
  ExperimentConfig c;
  apply_config_text(c, "# comment\nseed = 9\nlevels = 3..5  # trailing\nlog-base = 2\nmode = deterministic-durations\n");
  EXPECT_EQ(c.master_seed, 9u);
  EXPECT_EQ(c.levels, (std::vector<int>{3, 4, 5}));
  EXPECT_EQ(c.log_base, 2.0);
  EXPECT_EQ(c.mode, DurationMode::deterministic);
  EXPECT_THROW(apply_config_text(c, "colour = red\n"), std::invalid_argument);
  EXPECT_THROW(apply_config_text(c, "paths\n"), std::invalid_argument);
  EXPECT_THROW(apply_config_text(c, "paths = many\n"), std::invalid_argument);
}

TEST(Config, EchoRoundTripsAndOmitsExecutionSettings) {
  ExperimentConfig c = small_config();
  c.eta = 0.3;
  c.output = "/tmp/x";
  c.threads = 7;
  const std::string echo = c.echo();
  EXPECT_EQ(echo.find("threads"), std::string::npos);
  EXPECT_EQ(echo.find("out"), std::string::npos);
  ExperimentConfig d;
  apply_config_text(d, echo);
  EXPECT_EQ(d.echo(), echo);
}

TEST(Config, Validation) {
  ExperimentConfig c;
  EXPECT_NO_THROW(c.validate());
  c.paths = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.horizons = {-1.0};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.eta = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Config, ThreadResolution) {
  EXPECT_EQ(resolve_threads(3), 3u);
  EXPECT_GE(resolve_threads(0), 1u);
}

TEST(Report, CsvFormat) {
  ExperimentReport r;
  r.rows.push_back(scalar_row("x", 2, 0.1, "s", 1.0 / 3.0, 5, 42));
  EXPECT_EQ(to_csv(r),
            "experiment,k,T,statistic,mean,stderr,median,q10,q90,n_paths,seed\n"
            "x,2,0.10000000000000001,s,0.33333333333333331,0,0.33333333333333331,0.33333333333333331,"
            "0.33333333333333331,5,42\n");
}

TEST(Report, JsonMirrorsRowsAndConfig) {
  const ExperimentReport r = run_sup_rate(small_config());
  const auto doc = nlohmann::json::parse(to_json(r));
  EXPECT_EQ(doc["rows"].size(), r.rows.size());
  EXPECT_EQ(doc["metadata"]["config"].get<std::string>(), small_config().echo());
  EXPECT_EQ(doc["rows"][0]["mean"].get<double>(), r.rows[0].mean);
  EXPECT_EQ(doc["metadata"]["version"].get<std::string>(), kVersion);
}

TEST(Report, StderrIsSampleSdOverRootN) {
  const std::vector<double> v{0.1, 0.4, 0.2, 0.9};
  const ReportRow row = make_row("e", 1, 1.0, "s", v, 0);
  double mean = 0.0;
  for (double x : v) mean += x / 4.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  EXPECT_NEAR(row.stderr_, std::sqrt(ss / 3.0) / 2.0, 1e-12);
}

TEST(Streaming, MatchesMaterializedSkeleton) {
  const std::vector<int> levels{2, 4};
  const std::vector<double> horizons{0.1, 0.3};
  for (std::uint64_t p = 0; p < 4; ++p) {
    const PathDeviations s = simulate_path_deviations(law(), DurationMode::exact, 5, p, levels, 3, horizons);
    RngStream rng(5, p);
    const CrossingSkeleton fine = generate_skeleton(rng, law(), 7, 0.0, 0.3);
    for (std::size_t a = 0; a < levels.size(); ++a) {
      const int k = levels[a];
      const CrossingSkeleton ref = coarsen(fine, k + 3);
      for (std::size_t b = 0; b < horizons.size(); ++b) {
        const auto d = sup_deviation(build_field(coarsen(ref, k)), build_proxy(build_field(ref)), horizons[b]);
        ASSERT_EQ(s.sup_deviation[a * 2 + b], d.sup_deviation);
        ASSERT_EQ(s.local_time_sup[a * 2 + b], d.local_time_sup);
      }
    }
  }
}

TEST(Streaming, VariationMatchesMaterializedField) {
  const std::vector<int> levels{2, 3};
  const std::vector<double> horizons{0.5, 1.0};
  for (std::uint64_t p = 0; p < 4; ++p) {
    const auto v = simulate_path_variation(law(), DurationMode::exact, 6, p, levels, 3.0, 1, horizons);
    RngStream rng(6, p);
    const CrossingSkeleton fine = generate_skeleton(rng, law(), 3, 0.0, 1.0);
    for (std::size_t a = 0; a < levels.size(); ++a) {
      const auto f = build_field(coarsen(fine, levels[a]));
      for (std::size_t b = 0; b < horizons.size(); ++b) {
        const double expect = sup_pvar_over_time(f, 3.0, 1, horizons[b]);
        ASSERT_NEAR(v[a * 2 + b], expect, 1e-12 * std::max(1.0, expect));
      }
    }
  }
}

TEST(Experiments, EveryCellPresentOnce) {
  const ExperimentReport r = run_sup_rate(small_config());
  std::set<std::tuple<int, double, std::string>> seen;
  for (const auto& row : r.rows) ASSERT_TRUE(seen.insert({row.k, row.T, row.statistic}).second);
  for (int k : {2, 3, 4}) {
    for (double T : {0.25, 0.5}) EXPECT_EQ(r.row(k, T, "R").n_paths, 6u);
  }
}

TEST(Experiments, ReproducibleAcrossThreadCounts) {
  ExperimentConfig c = small_config();
  const std::string one = to_csv(run_sup_rate(c));
  c.threads = 3;
  EXPECT_EQ(to_csv(run_sup_rate(c)), one);
  c.threads = 1;
  const std::string var1 = to_csv(run_variation(c));
  c.threads = 4;
  EXPECT_EQ(to_csv(run_variation(c)), var1);
}

TEST(Experiments, ProxyAtCoarseLevelGivesZero) {
  ExperimentConfig c = small_config();
  c.paths = 1;
  c.proxy_offset = 0;
  const ExperimentReport r = run_sup_rate(c);
  EXPECT_EQ(r.row(3, 0.5, "R").mean, 0.0);
  const ExperimentReport lp = run_lp_rate(c);
  EXPECT_EQ(lp.row(3, 0.5, "moment").mean, 0.0);
}

TEST(Experiments, LpRateRowsAndSlopes) {
  const ExperimentReport r = run_lp_rate(small_config());
  for (int k : {2, 3, 4}) {
    EXPECT_NO_THROW(r.row(k, 0.0, "loglog_slope"));
    const double m = r.row(k, 0.5, "moment").mean;
    EXPECT_NEAR(r.row(k, 0.5, "normalized_moment").mean, m / std::pow(0.5, 0.75), 1e-12 * m);
  }
}

TEST(Experiments, VariationNearZeroForTinyHorizon) {
  ExperimentConfig c = small_config();
  c.horizons = {1e-4};
  const ExperimentReport r = run_variation(c);
  for (int k : {2, 3, 4}) EXPECT_LT(r.row(k, 1e-4, "sup_variation").mean, 1e-6);
}

TEST(Experiments, ScalingTestProducesKsRows) {
  ExperimentConfig c = small_config();
  c.levels = {3};
  c.paths = 20;
  const ExperimentReport r = run_scaling_test(c);
  const double p = r.row(3, 0.0, "ks_p_value").mean;
  EXPECT_GE(p, 0.0);
  EXPECT_LE(p, 1.0);
  EXPECT_EQ(r.row(3, 0.25, "F_over_lambda").n_paths, 20u);
}

TEST(Experiments, SubadditivitySinglePath) {
  ExperimentConfig c = small_config();
  c.paths = 1;
  const ExperimentReport r = run_subadditivity(c);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.row(2, 0.5, "violations").mean, 0.0);
}

TEST(Experiments, BudgetGuard) {
  ExperimentConfig c = small_config();
  c.step_budget = 10.0;
  EXPECT_THROW(run_sup_rate(c), BudgetError);
  EXPECT_THROW(run_variation(c), BudgetError);
  EXPECT_THROW(run_scaling_test(c), BudgetError);
  EXPECT_THROW(run_subadditivity(c), BudgetError);
}

TEST(Selftest, PassesAndRejectsZeroPaths) {
  ExperimentConfig c;
  c.paths = 200;
  EXPECT_TRUE(run_selftest(c).passed());
  c.mode = DurationMode::deterministic;
  const ExperimentReport d = run_selftest(c);
  EXPECT_TRUE(d.passed());
  EXPECT_NE(d.verdicts.front().detail.find("skipped"), std::string::npos);
  c.paths = 0;
  EXPECT_THROW(run_selftest(c), std::invalid_argument);
}

TEST(Identities, HoldOnRandomPaths) {
  for (std::uint64_t p = 0; p < 3; ++p) {
    RngStream rng(7, p);
    const CrossingSkeleton fine = generate_skeleton(rng, law(), 7, 0.0, 0.3);
    const IdentityReport r = check_identities(fine, 3, 0.3);
    EXPECT_GT(r.checks, 0u);
    EXPECT_EQ(r.failures(), 0u);
  }
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                 if (i == 5) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}

}  // namespace
}  // namespace upcross
