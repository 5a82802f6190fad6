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

#include "fdlab/sobolev.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fdlab/distribution.h"
#include "fdlab/error.h"
#include "fdlab/summation.h"

namespace fdlab {

InequalityReport MakeReport(double lhs, double rhs, double rel_tol,
                            double abs_tol) {
  InequalityReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.rel_tol = rel_tol;
  r.abs_tol = abs_tol;
  r.holds = lhs <= rhs * (1.0 + rel_tol) + abs_tol;
  r.ratio = rhs > 0.0 ? lhs / rhs : 0.0;
  return r;
}

double unit_ball_volume(int n) {
  if (n < 1) throw Error("unit ball volume needs n >= 1");
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double isoperimetric_constant(int n) {
  return 1.0 / (n * std::pow(unit_ball_volume(n), 1.0 / n));
}

InequalityReport sharp_sobolev_check(const ScalarField& field) {
  const int n = field.grid().dim();
  const double q = static_cast<double>(n) / (n - 1);
  CompensatedSum power;
  for (double v : field.values()) power += std::pow(std::abs(v), q);
  const double lhs =
      std::pow(field.grid().cell_volume() * power.value(), 1.0 / q);
  const double grad_l1 = integrate(magnitude(gradient(field)));
  InequalityReport r = MakeReport(lhs, isoperimetric_constant(n) * grad_l1);
  r.support_warning = !vanishes_on_boundary(field, kSupportRelTol);
  return r;
}

InequalityReport superlevel_check(const ScalarField& field) {
  const int n = field.grid().dim();
  const StepDistribution dist = upper_distribution(field);
  const std::vector<double> mu = upper_of_field(field, dist);
  const ScalarField grad = magnitude(gradient(field));
  const double power = (n - 1.0) / n;
  CompensatedSum sum;
  for (std::size_t k = 0; k < field.size(); ++k) {
    if (grad[k] != 0.0) sum += grad[k] * std::pow(mu[k], -power);
  }
  const double rhs = isoperimetric_constant(n) *
                     field.grid().cell_volume() * sum.value();
  InequalityReport r = MakeReport(dist.max_level(), rhs);
  r.support_warning = !vanishes_on_boundary(field, kSupportRelTol);
  return r;
}

InequalityReport band_bound_check(const ScalarField& field, double a,
                                  double b) {
  const int n = field.grid().dim();
  const StepDistribution dist = upper_distribution(field);
  if (!(a >= 0.0)) throw Error("band bound needs a >= 0");
  if (!(a < b)) throw Error("band bound needs a < b");
  if (!(b < dist.max_level())) {
    std::ostringstream msg;
    msg << "band bound needs b < max value " << dist.max_level()
        << " so that upper(b) > 0";
    throw Error(msg.str());
  }
  const ScalarField grad = magnitude(gradient(field));
  CompensatedSum sum;
  for (std::size_t k = 0; k < field.size(); ++k) {
    if (field[k] > a && field[k] < b) sum += grad[k];
  }
  const double mu_b = dist.upper(b);
  const double rhs = isoperimetric_constant(n) *
                     field.grid().cell_volume() * sum.value() /
                     std::pow(mu_b, (n - 1.0) / n);
  InequalityReport r = MakeReport(b - a, rhs);
  r.support_warning = !vanishes_on_boundary(field, kSupportRelTol);
  return r;
}

}  // namespace fdlab
