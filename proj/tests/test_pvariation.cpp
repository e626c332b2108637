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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "upcross/philox.hpp"
#include "upcross/skeleton.hpp"

namespace upcross {
namespace {

// Exhaustive max over index subsets; independent of the library code.
double enumerate(const std::vector<double>& v, double q) {
  double best = 0.0;
  const unsigned n = static_cast<unsigned>(v.size());
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    double s = 0.0;
    double last = 0.0;
    bool have = false;
    for (unsigned i = 0; i < n; ++i) {
      if (!(mask & (1u << i))) continue;
      if (have) s += std::pow(std::abs(v[i] - last), q);
      last = v[i];
      have = true;
    }
    best = std::max(best, s);
  }
  return best;
}

std::vector<double> random_sequence(RngStream& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform() < 0.3 ? std::floor(4 * rng.uniform()) : 6.0 * rng.uniform() - 3.0;
  return v;
}

CrossingSkeleton from_values(int level, const std::vector<int>& units, double horizon) {
  CrossingSkeleton s(level, units.front(), horizon);
  for (std::size_t i = 1; i < units.size(); ++i) s.push_step(static_cast<double>(i), units[i] - units[i - 1]);
  return s;
}

TEST(PvarSequence, SmallExamples) {
  EXPECT_DOUBLE_EQ(pvar_sequence(std::vector<double>{0, 1, 0}, 2).value, 2.0);
  EXPECT_DOUBLE_EQ(pvar_sequence(std::vector<double>{0, 1, 2}, 2).value, 4.0);
  const auto r = pvar_sequence(std::vector<double>{0, 1, 2}, 2);
  EXPECT_EQ(r.indices, (std::vector<std::size_t>{0, 2}));
  EXPECT_DOUBLE_EQ(pvar_sequence(std::vector<double>{5}, 3).value, 0.0);
}

TEST(PvarSequence, RejectsBadInput) {
  EXPECT_THROW(pvar_sequence(std::vector<double>{}, 2), std::invalid_argument);
  EXPECT_THROW(pvar_sequence(std::vector<double>{1, 2}, 0.5), std::invalid_argument);
}

TEST(PvarSequence, MatchesEnumeration) {
  RngStream rng(41, 0);
  for (int trial = 0; trial < 400; ++trial) {
    const auto v = random_sequence(rng, 1 + trial % 12);
    for (double q : {1.0, 1.5, 2.0, 3.0}) {
      const double expect = enumerate(v, q);
      ASSERT_NEAR(pvar_sequence(v, q).value, expect, 1e-12 * std::max(1.0, expect)) << trial << " q=" << q;
    }
  }
}

TEST(PvarSequence, AttainingSubsequenceReproducesValue) {
  RngStream rng(42, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto v = random_sequence(rng, 30);
    const auto r = pvar_sequence(v, 2.5);
    ASSERT_TRUE(std::is_sorted(r.indices.begin(), r.indices.end()));
    double s = 0.0;
    for (std::size_t i = 1; i < r.indices.size(); ++i) s += std::pow(std::abs(v[r.indices[i]] - v[r.indices[i - 1]]), 2.5);
    ASSERT_NEAR(s, r.value, 1e-12 * std::max(1.0, r.value));
  }
}

TEST(PvarSequence, OneVariationIsTotalVariationOfExtrema) {
  RngStream rng(43, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto v = random_sequence(rng, 40);
    double tv = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) tv += std::abs(v[i] - v[i - 1]);
    ASSERT_NEAR(pvar_sequence(v, 1.0).value, tv, 1e-12 * tv);
  }
}

TEST(PvarSequence, HomogeneousOfDegreeQ) {
  RngStream rng(44, 0);
  const auto v = random_sequence(rng, 25);
  std::vector<double> w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) w[i] = 3.0 * v[i];
  const double a = pvar_sequence(v, 2.2).value;
  EXPECT_NEAR(pvar_sequence(w, 2.2).value, std::pow(3.0, 2.2) * a, 1e-11 * a);
}

TEST(PvarSequence, ExtremaKeepEndpointsAndTurningPoints) {
  const std::vector<double> v{1, 1, 2, 3, 3, 2, 2, 5, 4};
  EXPECT_EQ(extrema_indices(v), (std::vector<std::size_t>{0, 3, 5, 7, 8}));
}

TEST(PvarCounts, AgreesWithSequenceForm) {
  RngStream rng(45, 0);
  std::vector<double> scratch;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::int64_t> counts(1 + trial % 30);
    std::vector<double> as_double(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
      counts[i] = static_cast<std::int64_t>(rng.next_u64() % 5);
      as_double[i] = 0.25 * static_cast<double>(counts[i]);
    }
    const double expect = pvar_sequence(as_double, 3.0).value;
    ASSERT_NEAR(pvar_counts(counts, 3.0, 0.25, scratch), expect, 1e-12 * std::max(1.0, expect));
  }
}

TEST(IntervalCells, CoversInterval) {
  const IntervalCells c = interval_cells(3, 1);
  EXPECT_EQ(c.first, -16);
  EXPECT_EQ(c.last, 16);
}

TEST(PvarField, ZeroAtTimeZero) {
  const ExitTimeLaw law;
  RngStream rng(46, 0);
  const auto f = build_field(generate_skeleton(rng, law, 4, 0.0, 0.5));
  EXPECT_EQ(pvar_field(f, 0.0, 3.0, 1).value, 0.0);
  EXPECT_THROW(pvar_field(f, 0.1, 3.0, 0), std::invalid_argument);
}

TEST(PvarField, SingleBump) {
  // Level 2 walk 0,1,0: edge 1 upcrossed once, U = 2 * 2^-2 = 0.5 on one cell.
  const auto f = build_field(from_values(2, {0, 1, 0}, 2.0));
  EXPECT_DOUBLE_EQ(pvar_field(f, 2.0, 3.0, 1).value, 2.0 * std::pow(0.5, 3.0));
  EXPECT_DOUBLE_EQ(pvar_field(f, 0.5, 3.0, 1).value, 0.0);
}

TEST(PvarField, BumpOnBoundaryCellCountsOnce) {
  // Level 1, I_1 cells j in [-4, 4]; reach edge 4 (x = 2) and come back.
  const auto f = build_field(from_values(1, {0, 1, 2, 3, 4, 3, 2, 1, 0}, 8.0));
  // U = 1 on cells 1..4; only the left rise is inside I_1.
  EXPECT_DOUBLE_EQ(pvar_field(f, 8.0, 2.0, 1).value, 1.0);
}

TEST(PvarField, MatchesEnumerationOverCellGrid) {
  const ExitTimeLaw law;
  for (std::uint64_t p = 0; p < 10; ++p) {
    RngStream rng(47, p);
    const auto f = build_field(generate_skeleton(rng, law, 1, 0.0, 0.6));
    // I_1 at level 1 has cells -4..4: nine representatives, small enough to enumerate.
    std::vector<double> v;
    for (std::int64_t j = -4; j <= 4; ++j) v.push_back(f.U_value(0.6, std::ldexp(static_cast<double>(j), -1)));
    const double expect = enumerate(v, 3.0);
    ASSERT_NEAR(pvar_field(f, 0.6, 3.0, 1).value, expect, 1e-12 * std::max(1.0, expect));
  }
}

TEST(PvarField, LargerIntervalNeverSmaller) {
  const ExitTimeLaw law;
  for (std::uint64_t p = 0; p < 20; ++p) {
    RngStream rng(48, p);
    const auto f = build_field(generate_skeleton(rng, law, 4, 0.0, 4.0));
    ASSERT_GE(pvar_field(f, 4.0, 3.0, 3).value, pvar_field(f, 4.0, 3.0, 1).value);
  }
}

TEST(SupPvarOverTime, MatchesDenseTimeGrid) {
  const ExitTimeLaw law;
  for (std::uint64_t p = 0; p < 5; ++p) {
    RngStream rng(49, p);
    const CrossingSkeleton s = generate_skeleton(rng, law, 3, 0.0, 1.5);
    const auto f = build_field(s);
    double dense = 0.0;
    for (std::size_t n = 0; n <= s.step_count(); ++n) {
      if (s.time(n) <= 1.5) dense = std::max(dense, pvar_field(f, s.time(n), 3.0, 1).value);
    }
    for (double t = 0.0; t <= 1.5; t += 1e-3) dense = std::max(dense, pvar_field(f, t, 3.0, 1).value);
    ASSERT_NEAR(sup_pvar_over_time(f, 3.0, 1, 1.5), dense, 1e-12 * std::max(1.0, dense));
  }
}

TEST(SupPvarOverTime, EdgeCasesAndMonotonicity) {
  const auto f = build_field(from_values(2, {0, 1, 0}, 2.0));
  EXPECT_EQ(sup_pvar_over_time(f, 3.0, 1, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(sup_pvar_over_time(f, 3.0, 1, 1.0), pvar_field(f, 1.0, 3.0, 1).value);
  EXPECT_THROW(sup_pvar_over_time(f, 3.0, 1, 3.0), std::out_of_range);

  const ExitTimeLaw law;
  RngStream rng(50, 0);
  const auto g = build_field(generate_skeleton(rng, law, 4, 0.0, 1.0));
  double prev = 0.0;
  for (double T = 0.0; T <= 1.0; T += 0.1) {
    const double v = sup_pvar_over_time(g, 3.0, 1, T);
    ASSERT_GE(v, prev);
    prev = v;
  }
}

}  // namespace
}  // namespace upcross
