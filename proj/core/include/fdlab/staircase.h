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

#ifndef FDLAB_STAIRCASE_H_
#define FDLAB_STAIRCASE_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fdlab/distribution.h"
#include "fdlab/field.h"

namespace fdlab {

// A non-decreasing, left-continuous F : [0, inf] -> [0, inf].
//
// Either an exact step function or an analytic closure. Step functions hold
// values[0] on [0, knots[0]], values[j] on (knots[j-1], knots[j]] and
// values.back() on (knots.back(), inf); F(inf) is given separately.
class MonotoneFn {
 public:
  static MonotoneFn Step(std::vector<double> knots, std::vector<double> values,
                         double at_infinity);
  // `s` overrides the search for sup{t : F(t) < F(inf)}.
  static MonotoneFn Analytic(std::function<double(double)> f,
                             double at_infinity,
                             std::optional<double> s = std::nullopt);

  double operator()(double t) const;
  double at_infinity() const { return at_infinity_; }
  bool is_step() const { return !analytic_; }
  std::span<const double> knots() const { return knots_; }
  std::span<const double> values() const { return values_; }

  // s = sup{t in [0, inf] : F(t) < F(inf)}, with sup of the empty set 0.
  double support_end() const;

 private:
  MonotoneFn() = default;

  std::function<double(double)> analytic_;
  std::optional<double> s_hint_;
  std::vector<double> knots_;
  std::vector<double> values_;
  double at_infinity_ = 0.0;
};

// t -> upper(t)^(-gamma) as an exact step function; infinite past the top
// level.
MonotoneFn InverseUpperPower(const StepDistribution& dist, double gamma);

enum class StaircaseCase {
  kEmpty,     // s = 0
  kInterior,  // every threshold supremum stays below s
  kHit,       // some threshold supremum equals s; filler sequence follows
};

const char* ToString(StaircaseCase c);

struct StaircaseResult {
  std::vector<double> breakpoints;  // t_0 = 0 < t_1 < ...
  std::vector<double> values;       // F(t_i)
  double s = 0.0;
  StaircaseCase kind = StaircaseCase::kEmpty;
  double epsilon = 0.0;
};

// Threshold suprema t'_i = sup{t in [0, s] : F(t) <= F(0) + i*eps} with
// repeats skipped; in the hit case the remainder is
// t'_{k-1} + (s - t'_{k-1})(1 - 2^-j). Emits at most max_steps breakpoints
// after t_0. Step inputs are scanned exactly; analytic inputs bisect to
// 1e-12 relative.
StaircaseResult staircase_approx(const MonotoneFn& f, double epsilon,
                                 int max_steps);

// Staircase of t -> upper(t)^(-gamma) for a nonnegative field; s equals the
// field maximum.
StaircaseResult inverse_distribution_staircase(const ScalarField& field,
                                               double gamma, double epsilon,
                                               int max_steps);

// Largest |F(t_i) - F(t)| over t in the gaps (t_{i-1}, t_i], scanning every
// knot and every piece interior of a step function.
double max_gap_deviation(const MonotoneFn& f, const StaircaseResult& result);

}  // namespace fdlab

#endif  // FDLAB_STAIRCASE_H_
