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

#ifndef FDLAB_DISTORTION_H_
#define FDLAB_DISTORTION_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "fdlab/field.h"
#include "fdlab/staircase.h"

namespace fdlab {

// Pointwise relative tolerance for |Df|^n <= K J + defect.
inline constexpr double kPointwiseRelTol = 1e-9;
// Jacobian gate for the pointwise distortion quotient, relative to |Df|^n.
inline constexpr double kJacobianGate = 1e-12;

// Distortion data (K, Sigma, p, q). Sigma may hold +infinity.
struct DistortionData {
  ScalarField K;
  std::vector<double> sigma;
  double p = 1.0;
  double q = 1.0;

  DistortionData(ScalarField k, std::vector<double> s, double p_exp,
                 double q_exp);

  // 1/p + 1/q < 1.
  bool admissible() const;
  const Grid& grid() const { return K.grid(); }
};

// L^p norm over the grid domain; p = inf gives the max of |v|.
double lp_norm(const Grid& grid, std::span<const double> values, double p);

struct JacobianParts {
  ScalarField positive;  // max(J, 0)
  ScalarField negative;  // max(-J, 0)
};

JacobianParts jacobian_parts(const VectorMap& map);

struct PointwiseDistortion {
  ScalarField K;                  // |Df|^n / J where defined, 0 elsewhere
  std::vector<std::uint8_t> defined;  // J > kJacobianGate * |Df|^n
};

PointwiseDistortion pointwise_distortion(const VectorMap& map);

// Smallest Sigma with |Df|^n <= K J + Sigma: max(0, |Df|^n - K J).
ScalarField residual_defect(const VectorMap& map, const ScalarField& K);

struct Violation {
  std::size_t cell = 0;  // compact cell index
  double lhs = 0.0;
  double rhs = 0.0;
};

struct DistortionReport {
  std::size_t violation_count = 0;
  // max over cells of |Df|^n - K J - defect.
  double max_violation = 0.0;
  // Same excess divided by (1 + |Df|^n); compared against the tolerance.
  double max_relative_violation = 0.0;
  double K_norm_p = 0.0;
  double sigma_over_K_norm_q = 0.0;
  // Cells with infinite Sigma (or Sigma > 0 where K = 0); excluded from the
  // L^q norm.
  std::size_t infinite_sigma_cells = 0;
  std::size_t checked_cells = 0;
  ScalarField pointwise_K;
  ScalarField residual_sigma;
  std::vector<Violation> violations;
  // min(1/||K||_inf, 1 - 1/q), reported only for p = inf.
  std::optional<double> holder_exponent;
  double rel_tol = kPointwiseRelTol;
};

struct VerifyOptions {
  // With y0 the defect term is |f - y0|^n Sigma.
  std::optional<Point> y0;
  double rel_tol = kPointwiseRelTol;
  // Cells (compact indices) skipped by the pointwise check; empty = none.
  std::vector<std::uint8_t> excluded;
};

DistortionReport verify_distortion(const VectorMap& map,
                                   const DistortionData& data,
                                   const VerifyOptions& options = {});

struct ZeroIntegralResult {
  double value = 0.0;
  double pos_part = 0.0;
  double neg_part = 0.0;
  bool support_warning = false;
};

// Integral of J_f, expected to vanish when component i vanishes on the
// boundary.
ZeroIntegralResult zero_integral_check(const VectorMap& map, int i);

// Integrals of F(|f_i|) J, F(|f_i|) J^+ and F(|f_i|) J^-.
ZeroIntegralResult weighted_zero_integral_check(const VectorMap& map, int i,
                                                const MonotoneFn& f);

// (K, Sigma) -> (max(1, 2K), 4 Sigma).
DistortionData normalize_low_distortion(const DistortionData& data);

}  // namespace fdlab

#endif  // FDLAB_DISTORTION_H_
