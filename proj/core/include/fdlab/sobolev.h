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

#ifndef FDLAB_SOBOLEV_H_
#define FDLAB_SOBOLEV_H_

#include "fdlab/field.h"

namespace fdlab {

// Relative and absolute slack for grid-level inequality checks. The
// reference resolutions are 256^2 and 96^3.
inline constexpr double kInequalityRelTol = 0.02;
inline constexpr double kInequalityAbsTol = 1e-9;
// Boundary-adjacent values below this fraction of max|phi| count as zero.
inline constexpr double kSupportRelTol = 1e-9;

struct InequalityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  double ratio = 0.0;  // lhs / rhs, 0 when rhs == 0
  // Set when the field does not vanish on boundary-adjacent cells.
  bool support_warning = false;
  double rel_tol = kInequalityRelTol;
  double abs_tol = kInequalityAbsTol;
};

InequalityReport MakeReport(double lhs, double rhs,
                            double rel_tol = kInequalityRelTol,
                            double abs_tol = kInequalityAbsTol);

// omega_n = pi^(n/2) / Gamma(n/2 + 1).
double unit_ball_volume(int n);

// 1 / (n omega_n^(1/n)).
double isoperimetric_constant(int n);

// (int |phi|^(n/(n-1)))^((n-1)/n) <= C_n int |grad phi|.
InequalityReport sharp_sobolev_check(const ScalarField& field);

// max phi <= C_n int |grad phi| / upper(phi)^((n-1)/n).
InequalityReport superlevel_check(const ScalarField& field);

// b - a <= C_n int_{a < phi < b} |grad phi| / upper(b)^((n-1)/n).
InequalityReport band_bound_check(const ScalarField& field, double a,
                                  double b);

}  // namespace fdlab

#endif  // FDLAB_SOBOLEV_H_
