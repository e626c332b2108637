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
#include <functional>
#include <span>

namespace upcross {

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  /// Sample standard deviation (n - 1 denominator) over sqrt(n); 0 for n = 1.
  double stderr_ = 0.0;
  double median = 0.0;
  double q10 = 0.0;
  double q90 = 0.0;
};

/// Mean is accumulated in input order, so identical inputs give identical bits.
Summary summarize(std::span<const double> values);

/// Linearly interpolated quantile (Hyndman-Fan type 7) of unsorted data.
double quantile_of(std::span<const double> values, double p);

/// Kolmogorov distribution tail Q(x) = 2 sum_{j>=1} (-1)^(j-1) exp(-2 j^2 x^2);
/// Q(0) = 1.
double kolmogorov_tail(double x);

struct KsResult {
  double statistic = 0.0;  ///< sup |F_a - F_b|
  double p_value = 1.0;    ///< asymptotic
};

/// Two-sample Kolmogorov-Smirnov test; p-value from the asymptotic series with
/// the usual effective-size correction (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) D.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// One-sample KS test against a continuous CDF.
KsResult ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf);

/// Least-squares slope of y on x.
double ols_slope(std::span<const double> x, std::span<const double> y);

}  // namespace upcross
