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

#include "upcross/exit_time.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace upcross {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTableTail = 1e-4;
constexpr double kBulkEdge = 0.02;
constexpr std::size_t kTailTableSize = 512;
constexpr int kMaxTerms = 200;

// The quantile table is uniform in logit(u): nodes crowd into both tails, and
// the quantile function is close to linear in this coordinate there.
double logit(double u) { return std::log(u / (1.0 - u)); }

}  // namespace

ExitTimeLaw::ExitTimeLaw(ExitTimeLawOptions options) : options_(options) {
  if (!(options_.truncation_tolerance > 0.0) || !(options_.series_crossover > 0.0)) {
    throw std::invalid_argument("ExitTimeLaw: tolerance and crossover must be positive");
  }
  if (options_.quantile_table_size < 16) {
    throw std::invalid_argument("ExitTimeLaw: quantile table needs at least 16 entries");
  }
  if (options_.newton_steps < 0) {
    throw std::invalid_argument("ExitTimeLaw: negative Newton step count");
  }
  // Bulk table uniform in u; tail tables uniform in logit(u), where the
  // quantile is far from polynomial in u. Beyond the tails: direct inversion.
  bulk_ = build_table(kBulkEdge, 1.0 - kBulkEdge, options_.quantile_table_size, false);
  lower_ = build_table(logit(kTableTail), logit(kBulkEdge), kTailTableSize, true);
  upper_ = build_table(-logit(kBulkEdge), -logit(kTableTail), kTailTableSize, true);
}

ExitTimeLaw::Table ExitTimeLaw::build_table(double lo, double hi, std::size_t size,
                                            bool in_logit) const {
  Table table;
  table.lo = lo;
  table.hi = hi;
  table.step = (hi - lo) / static_cast<double>(size - 1);
  table.t.resize(size);
  table.slope.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    const double x = i + 1 == size ? hi : lo + table.step * static_cast<double>(i);
    const double u = in_logit ? 1.0 / (1.0 + std::exp(-x)) : x;
    table.t[i] = quantile(u);
    // dt/dx, with du/dx = u(1-u) in the logit coordinate.
    table.slope[i] = (in_logit ? u * (1.0 - u) : 1.0) / pdf(table.t[i]);
  }
  return table;
}

double ExitTimeLaw::Table::interpolate(double x) const noexcept {
  const double s = (x - lo) / step;
  auto i = static_cast<std::size_t>(s);
  if (i + 1 >= t.size()) i = t.size() - 2;
  const double w = s - static_cast<double>(i);
  const double w2 = w * w;
  const double w3 = w2 * w;
  return (2.0 * w3 - 3.0 * w2 + 1.0) * t[i] + (w3 - 2.0 * w2 + w) * step * slope[i] +
         (-2.0 * w3 + 3.0 * w2) * t[i + 1] + (w3 - w2) * step * slope[i + 1];
}

ExitTimeLaw::Eval ExitTimeLaw::evaluate_small(double t) const {
  // P(tau <= t) = 2 sum (-1)^n erfc((2n+1)/sqrt(2t))
  const double tol = options_.truncation_tolerance;
  const double inv_sqrt_2t = 1.0 / std::sqrt(2.0 * t);
  const double dens_scale = 2.0 / std::sqrt(2.0 * kPi * t * t * t);
  double cdf = 0.0;
  double pdf = 0.0;
  for (int n = 0; n < kMaxTerms; ++n) {
    const double a = 2.0 * n + 1.0;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const double c = 2.0 * std::erfc(a * inv_sqrt_2t);
    const double d = dens_scale * a * std::exp(-a * a / (2.0 * t));
    cdf += sign * c;
    pdf += sign * d;
    if (c < tol && d < tol) break;
  }
  return {cdf, 1.0 - cdf, pdf};
}

ExitTimeLaw::Eval ExitTimeLaw::evaluate_large(double t) const {
  // P(tau > t) = sum (-1)^n 4/((2n+1) pi) exp(-(2n+1)^2 pi^2 t / 8)
  const double tol = options_.truncation_tolerance;
  const double a = kPi * kPi * t / 8.0;
  const double ratio = std::exp(-8.0 * a);
  double e = std::exp(-a);  // exp(-(2n+1)^2 a)
  double step = ratio;      // ratio^(n+1)
  double surv = 0.0;
  double pdf = 0.0;
  for (int n = 0; n < kMaxTerms; ++n) {
    const double odd = 2.0 * n + 1.0;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const double s = 4.0 / (odd * kPi) * e;
    const double d = odd * kPi / 2.0 * e;
    surv += sign * s;
    pdf += sign * d;
    if ((s < tol && d < tol) || e == 0.0) break;
    e *= step;
    step *= ratio;
  }
  return {1.0 - surv, surv, pdf};
}

ExitTimeLaw::Eval ExitTimeLaw::evaluate(double t) const {
  if (t <= 0.0) return {0.0, 1.0, 0.0};
  if (std::isinf(t)) return {1.0, 0.0, 0.0};
  return t < options_.series_crossover ? evaluate_small(t) : evaluate_large(t);
}

double ExitTimeLaw::cdf(double t) const {
  if (!(t >= 0.0)) throw std::domain_error("exit_time_cdf: t must be nonnegative");
  return evaluate(t).cdf;
}

double ExitTimeLaw::survival(double t) const {
  if (!(t >= 0.0)) throw std::domain_error("exit_time_survival: t must be nonnegative");
  return evaluate(t).survival;
}

double ExitTimeLaw::pdf(double t) const {
  if (!(t >= 0.0)) throw std::domain_error("exit_time_pdf: t must be nonnegative");
  return evaluate(t).pdf;
}

double ExitTimeLaw::cdf_small_time(double t) const {
  if (!(t >= 0.0)) throw std::domain_error("exit_time_cdf: t must be nonnegative");
  return t == 0.0 ? 0.0 : evaluate_small(t).cdf;
}

double ExitTimeLaw::cdf_large_time(double t) const {
  if (!(t >= 0.0)) throw std::domain_error("exit_time_cdf: t must be nonnegative");
  return evaluate_large(t).cdf;
}

double ExitTimeLaw::pdf_small_time(double t) const {
  if (!(t >= 0.0)) throw std::domain_error("exit_time_pdf: t must be nonnegative");
  return t == 0.0 ? 0.0 : evaluate_small(t).pdf;
}

double ExitTimeLaw::pdf_large_time(double t) const {
  if (!(t >= 0.0)) throw std::domain_error("exit_time_pdf: t must be nonnegative");
  return evaluate_large(t).pdf;
}

double ExitTimeLaw::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("exit_time_quantile: u must lie in (0, 1)");

  // Lower half: solve log F(t) = log u. Upper half: solve log S(t) = log(1-u).
  // Both residuals are increasing/decreasing and close to linear in the
  // relevant variable, so Newton converges fast; bisection guards the rest.
  const bool lower = u <= 0.5;
  const double target = lower ? std::log(u) : std::log1p(-u);
  auto residual = [&](double t, double& slope) {
    const Eval e = evaluate(t);
    if (lower) {
      slope = e.cdf > 0.0 ? e.pdf / e.cdf : 0.0;
      return (e.cdf > 0.0 ? std::log(e.cdf) : -HUGE_VAL) - target;
    }
    slope = e.survival > 0.0 ? -e.pdf / e.survival : 0.0;
    return (e.survival > 0.0 ? std::log(e.survival) : -HUGE_VAL) - target;
  };
  // Residual is increasing in t for the lower branch and decreasing otherwise.
  const double orient = lower ? 1.0 : -1.0;

  double lo = 1e-3;
  double hi = 64.0;
  double slope = 0.0;
  while (orient * residual(lo, slope) > 0.0 && lo > 1e-300) lo *= 0.5;
  while (orient * residual(hi, slope) < 0.0 && hi < 1e300) hi *= 2.0;

  double t = lower ? std::clamp(0.5 / std::log(4.0 / u), lo, hi)
                   : std::clamp(8.0 / (kPi * kPi) * std::log(4.0 / (kPi * (1.0 - u))), lo, hi);
  if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double r = residual(t, slope);
    if (r == 0.0) return t;
    if (orient * r > 0.0) {
      hi = t;
    } else {
      lo = t;
    }
    double next = (slope != 0.0 && std::isfinite(r)) ? t - r / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 1e-15 * t || hi - lo <= 1e-15 * hi) return next;
    t = next;
  }
  return t;
}

double ExitTimeLaw::fast_quantile(double u) const {
  double t;
  if (u >= bulk_.lo && u <= bulk_.hi) {
    t = bulk_.interpolate(u);
  } else {
    const double v = logit(u);
    if (v >= lower_.lo && v <= lower_.hi) {
      t = lower_.interpolate(v);
    } else if (v >= upper_.lo && v <= upper_.hi) {
      t = upper_.interpolate(v);
    } else {
      return quantile(u);
    }
  }

  if (u <= 0.5) {
    for (int k = 0; k < options_.newton_steps; ++k) {
      const Eval e = evaluate(t);
      t -= (e.cdf - u) / e.pdf;
    }
  } else {
    const double v = 1.0 - u;  // exact for u >= 0.5
    for (int k = 0; k < options_.newton_steps; ++k) {
      const Eval e = evaluate(t);
      t += (e.survival - v) / e.pdf;
    }
  }
  return t;
}

double ExitTimeLaw::sample(RngStream& rng, double h) const {
  return h * h * sample_unit(rng.next_u64());
}

const char* to_string(DurationMode mode) {
  return mode == DurationMode::exact ? "exact" : "deterministic-durations";
}

DurationMode parse_duration_mode(const std::string& text) {
  if (text == "exact") return DurationMode::exact;
  if (text == "deterministic-durations" || text == "deterministic") {
    return DurationMode::deterministic;
  }
  throw std::invalid_argument("unknown mode '" + text + "' (expected exact | deterministic-durations)");
}

ExitLawSelftest selftest_exit_law(const ExitTimeLaw& law, std::size_t n, std::uint64_t seed) {
  if (n < 10000) throw std::invalid_argument("selftest_exit_law: need at least 10^4 samples");

  ExitLawSelftest r;
  r.samples = n;
  RngStream rng(seed, 0);
  // Welford for E tau^2 and its standard error.
  double sum = 0.0;
  double m2_mean = 0.0;
  double m2_var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double tau = law.sample(rng, 1.0);
    sum += tau;
    const double sq = tau * tau;
    const double delta = sq - m2_mean;
    m2_mean += delta / static_cast<double>(i + 1);
    m2_var += delta * (sq - m2_mean);
  }
  const double nn = static_cast<double>(n);
  r.mean = sum / nn;
  r.mean_tolerance = 4.0 * std::sqrt(2.0 / 3.0) / std::sqrt(nn);
  r.mean_ok = std::abs(r.mean - ExitTimeLaw::kMean) <= r.mean_tolerance;

  r.second_moment = m2_mean;
  r.second_moment_stderr = std::sqrt(m2_var / (nn - 1.0)) / std::sqrt(nn);
  r.second_moment_tolerance = 4.0 * r.second_moment_stderr;
  r.second_moment_ok = std::abs(r.second_moment - ExitTimeLaw::kSecondMoment) <= r.second_moment_tolerance;

  for (int i = 0; i < 100; ++i) {
    const double t = 0.3 + 0.4 * i / 99.0;
    r.max_series_gap = std::max(r.max_series_gap, std::abs(law.cdf_small_time(t) - law.cdf_large_time(t)));
  }
  r.series_ok = r.max_series_gap <= r.series_gap_tolerance;
  return r;
}

}  // namespace upcross
