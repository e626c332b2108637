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

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "upcross/philox.hpp"

namespace upcross {

struct ExitTimeLawOptions {
  double truncation_tolerance = 1e-12;
  double series_crossover = 0.45;
  std::size_t quantile_table_size = 4096;
  /// Newton refinements applied after the table lookup when sampling.
  int newton_steps = 0;
};

/// Law of the first exit time of standard Brownian motion from [-1, 1].
///
/// Two series are used: the reflection (image) series in erfc for small t and
/// the spectral (eigenfunction) series for large t. Both alternate with
/// decreasing terms, so truncation error is bounded by the first omitted term.
/// The object is immutable after construction and may be shared by threads.
class ExitTimeLaw {
 public:
  explicit ExitTimeLaw(ExitTimeLawOptions options = {});

  /// P(tau <= t). Throws std::domain_error for negative or NaN t.
  double cdf(double t) const;
  /// P(tau > t), accurate in the upper tail.
  double survival(double t) const;
  double pdf(double t) const;

  double cdf_small_time(double t) const;
  double cdf_large_time(double t) const;
  double pdf_small_time(double t) const;
  double pdf_large_time(double t) const;

  /// Inverse CDF to full precision (safeguarded Newton on a log residual).
  /// Throws std::domain_error unless 0 < u < 1.
  double quantile(double u) const;

  /// Table-based inverse CDF used by the samplers; u in (0, 1).
  double fast_quantile(double u) const;

  /// Exit time of the unit interval driven by the top 52 bits of `bits`.
  double sample_unit(std::uint64_t bits) const {
    return fast_quantile(RngStream::to_open_unit(bits));
  }

  /// h^2 * tau_1: the exit time of [-h, h]. Consumes one 64-bit draw.
  double sample(RngStream& rng, double h) const;

  const ExitTimeLawOptions& options() const noexcept { return options_; }

  static constexpr double kMean = 1.0;
  static constexpr double kSecondMoment = 5.0 / 3.0;

 private:
  struct Eval {
    double cdf;
    double survival;
    double pdf;
  };
  Eval evaluate(double t) const;
  Eval evaluate_small(double t) const;
  Eval evaluate_large(double t) const;

  ExitTimeLawOptions options_;
  // Quantiles on a uniform grid in some coordinate x (u or logit u), with
  // cubic Hermite interpolation using dt/dx at the nodes.
  struct Table {
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;
    std::vector<double> t;
    std::vector<double> slope;
    double interpolate(double x) const noexcept;
  };
  Table build_table(double lo, double hi, std::size_t size, bool in_logit) const;

  Table bulk_;
  Table lower_;
  Table upper_;
};

/// How skeleton step durations are drawn.
enum class DurationMode {
  exact,          ///< h^2 * tau_1 with tau_1 from ExitTimeLaw
  deterministic,  ///< h^2; smoke tests only, never used for acceptance runs
};

const char* to_string(DurationMode mode);
DurationMode parse_duration_mode(const std::string& text);

struct ExitLawSelftest {
  std::size_t samples = 0;
  double mean = 0.0;
  double mean_tolerance = 0.0;
  double second_moment = 0.0;
  double second_moment_stderr = 0.0;
  double second_moment_tolerance = 0.0;
  double max_series_gap = 0.0;
  double series_gap_tolerance = 1e-10;
  bool mean_ok = false;
  bool second_moment_ok = false;
  bool series_ok = false;

  bool passed() const noexcept { return mean_ok && second_moment_ok && series_ok; }
};

/// Moment checks (E tau = 1, E tau^2 = 5/3, each within 4 standard errors)
/// and agreement of the two CDF series on [0.3, 0.7].
/// Throws std::invalid_argument when n < 10^4.
ExitLawSelftest selftest_exit_law(const ExitTimeLaw& law, std::size_t n, std::uint64_t seed);

}  // namespace upcross
