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
#include <span>
#include <vector>

#include "upcross/upcrossing_field.hpp"

namespace upcross {

struct VariationResult {
  /// sup over subsequences of sum |v[i_l] - v[i_{l-1}]|^q.
  double value = 0.0;
  /// Attaining subsequence (indices into the input, ascending).
  std::vector<std::size_t> indices;
  /// Grid points of the attaining subsequence (field variants only).
  std::vector<double> points;
};

/// q-variation of a finite sequence: the maximum over all subsequences
/// i_0 < ... < i_r of sum |v[i_l] - v[i_{l-1}]|^q.
///
/// The sequence is first reduced to its endpoints and strict local extrema
/// (an optimal subsequence can always be chosen among them for q >= 1), then
/// an O(n^2) DP runs over the reduced points. Ties prefer shorter
/// subsequences. Throws std::invalid_argument on empty input or q < 1.
VariationResult pvar_sequence(std::span<const double> values, double q);

/// Indices kept by the extrema reduction used in pvar_sequence.
std::vector<std::size_t> extrema_indices(std::span<const double> values);

/// I_m = [-2^m, 2^m] and the level-k edges whose cells meet it:
/// j in [-2^(m+k), 2^(m+k)].
struct IntervalCells {
  std::int64_t first;
  std::int64_t last;
};
IntervalCells interval_cells(int level, int m);

/// ||U^k(t)||^q_{I_m;q}: q-variation of x -> U^k(t, x) on I_m, evaluated on
/// one representative point per cell (its right end j 2^-k, which lies in the
/// cell and in I_m). Runs of empty cells outside the visited range collapse
/// to a single zero.
VariationResult pvar_field(const UpcrossingField& f, double t, double q, int m);

/// max over t <= T of pvar_field(f, t, q, m), evaluated at each completion
/// time <= T of an edge inside I_m (the restricted profile only changes there).
double sup_pvar_over_time(const UpcrossingField& f, double q, int m, double T);

/// q-variation of integer counts scaled by `scale`: scale^q * pvar(counts).
double pvar_counts(std::span<const std::int64_t> counts, double q, double scale,
                   std::vector<double>& scratch);

/// |x|^q with fast paths for q = 1, 2, 3.
inline double abs_pow(double x, double q) {
  const double a = x < 0 ? -x : x;
  if (q == 1.0) return a;
  if (q == 2.0) return a * a;
  if (q == 3.0) return a * a * a;
  return std::pow(a, q);
}

}  // namespace upcross
