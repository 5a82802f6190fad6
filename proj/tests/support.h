// Copyright 2026 The fdlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FDLAB_TESTS_SUPPORT_H_
#define FDLAB_TESTS_SUPPORT_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fdlab/field.h"
#include "fdlab/grid.h"

namespace fdlab::testing {

inline GridPtr Square(int n) { return build_grid(UnitBox(2), n); }
inline GridPtr Disk(int n) { return build_grid(UnitBall(2), n); }

inline double Radius(const Point& x) {
  return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
}

inline ScalarField Cone(const GridPtr& g) {
  return sample(g, [](const Point& x) { return std::max(0.0, 1.0 - Radius(x)); });
}

// Nonnegative field with repeated levels and a zero region, drawn from `rng`.
inline ScalarField RandomField(const GridPtr& g, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> style(0, 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> level(0, 7);
  const int s = style(rng);
  std::vector<double> v(g->masked_count());
  for (double& x : v) {
    if (s == 0) {
      x = u(rng);
    } else if (s == 1) {
      x = 0.25 * level(rng);
    } else {
      x = u(rng) < 0.3 ? 0.0 : std::exp(4.0 * u(rng));
    }
  }
  return ScalarField(g, std::move(v));
}

// Dense brute-force measure of {phi >= t} (or > t).
inline double BruteMeasure(const ScalarField& f, double t, bool strict) {
  std::size_t count = 0;
  for (double v : f.values()) count += strict ? v > t : v >= t;
  return count * f.grid().cell_volume();
}

}  // namespace fdlab::testing

#endif  // FDLAB_TESTS_SUPPORT_H_
