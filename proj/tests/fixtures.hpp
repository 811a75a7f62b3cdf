// Copyright 2026 The qmsroot Authors
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

#include <cmath>
#include <numbers>
#include <vector>

#include "qmsroot/qms_model.hpp"
#include "qmsroot/random.hpp"

namespace qmsroot::testing {

inline constexpr double pi = std::numbers::pi;
inline constexpr double e = std::numbers::e;

// D = diag((1 + 1/pi)/2, (1 - 1/pi)/2) with the jumps E12, E21.
inline LindbladSpec two_level() {
  const auto state = DensityState::from_diagonal({(1 + 1 / pi) / 2, (1 - 1 / pi) / 2});
  const double w = std::log((pi - 1) / (pi + 1));
  return LindbladSpec(state, {{matrix_unit(2, 0, 1), w, 1.0}, {matrix_unit(2, 1, 0), -w, 1.0}});
}

// D = diag(1, pi^2, e^2) / (1 + pi^2 + e^2) with the jumps E23, E32.
inline LindbladSpec three_level() {
  const double z = 1 + pi * pi + e * e;
  const auto state = DensityState::from_diagonal({1 / z, pi * pi / z, e * e / z});
  const double w = 2 - 2 * std::log(pi);
  return LindbladSpec(state, {{matrix_unit(3, 1, 2), w, 1.0}, {matrix_unit(3, 2, 1), -w, 1.0}});
}

// Tracial state with random adjoint-closed jumps. Every jump has omega = 0.
inline LindbladSpec random_tracial(Rng& rng, int n) {
  std::vector<JumpInput> jumps;
  const int count = 1 + static_cast<int>(rng.uniform() * 3);
  for (int t = 0; t < count; ++t) {
    const CMatrix v = rng.complex_matrix(n, n);
    const double w = rng.uniform(0.2, 2.0);
    jumps.push_back({v, 0.0, w});
    jumps.push_back({v.adjoint(), 0.0, w});
  }
  return LindbladSpec(DensityState::tracial(n), jumps);
}

}  // namespace qmsroot::testing
