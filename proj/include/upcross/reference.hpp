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

// Slow exhaustive implementations used by the selftest to cross-check the
// fast paths. Exponential or quadratic; keep inputs small.

#include <span>

namespace upcross::reference {

/// Max over all nonempty subsequences of sum |increments|^q by enumeration
/// of every index subset. Length must be <= 24.
double pvar_enumerate(std::span<const double> values, double q);

}  // namespace upcross::reference
