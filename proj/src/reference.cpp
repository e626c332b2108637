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

#include "upcross/reference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace upcross::reference {

double pvar_enumerate(std::span<const double> values, double q) {
  const std::size_t n = values.size();
  if (n == 0 || n > 24) throw std::invalid_argument("pvar_enumerate: length must be in [1, 24]");
  double best = 0.0;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
    double sum = 0.0;
    int prev = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask >> i & 1u)) continue;
      if (prev >= 0) sum += std::pow(std::abs(values[i] - values[static_cast<std::size_t>(prev)]), q);
      prev = static_cast<int>(i);
    }
    best = std::max(best, sum);
  }
  return best;
}

}  // namespace upcross::reference
