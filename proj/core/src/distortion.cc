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

#include "fdlab/distortion.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fdlab/error.h"
#include "fdlab/summation.h"

namespace fdlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckExponent(double e, const char* name) {
  if (!(e >= 1.0)) {
    throw Error(std::string("exponent ") + name + " must lie in [1, inf]");
  }
}

}  // namespace

DistortionData::DistortionData(ScalarField k, std::vector<double> s,
                               double p_exp, double q_exp)
    : K(std::move(k)), sigma(std::move(s)), p(p_exp), q(q_exp) {
  CheckExponent(p, "p");
  CheckExponent(q, "q");
  if (sigma.size() != K.size()) {
    throw Error("Sigma and K must be sampled on the same cells");
  }
  for (double v : sigma) {
    if (std::isnan(v) || v < 0.0) throw Error("Sigma must be nonnegative");
  }
}

bool DistortionData::admissible() const { return 1.0 / p + 1.0 / q < 1.0; }

double lp_norm(const Grid& grid, std::span<const double> values, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  CompensatedSum sum;
  for (double v : values) sum += std::pow(std::abs(v), p);
  return std::pow(grid.cell_volume() * sum.value(), 1.0 / p);
}

JacobianParts jacobian_parts(const VectorMap& map) {
  const ScalarField j = jacobian(differential(map));
  std::vector<double> pos(j.size());
  std::vector<double> neg(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    pos[k] = std::max(j[k], 0.0);
    neg[k] = std::max(-j[k], 0.0);
  }
  return {ScalarField(map.grid_ptr(), std::move(pos), true),
          ScalarField(map.grid_ptr(), std::move(neg), true)};
}

PointwiseDistortion pointwise_distortion(const VectorMap& map) {
  const MatrixField d = differential(map);
  const int n = map.dim();
  std::vector<double> k_values(d.size(), 0.0);
  std::vector<std::uint8_t> defined(d.size(), 0);
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double norm_n = std::pow(OperatorNorm(d.cell(k), n), n);
    const double jac = Determinant(d.cell(k), n);
    if (jac > kJacobianGate * norm_n && jac > 0.0) {
      k_values[k] = norm_n / jac;
      defined[k] = 1;
    }
  }
  return {ScalarField(map.grid_ptr(), std::move(k_values), true),
          std::move(defined)};
}

ScalarField residual_defect(const VectorMap& map, const ScalarField& K) {
  if (K.size() != map.grid().masked_count()) {
    throw Error("K must be sampled on the map's grid");
  }
  for (std::size_t k = 0; k < K.size(); ++k) {
    if (K[k] < 1.0) {
      throw Error("residual defect requires K >= 1 (cell " +
                  std::to_string(k) + ")");
    }
  }
  const MatrixField d = differential(map);
  const int n = map.dim();
  std::vector<double> out(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double norm_n = std::pow(OperatorNorm(d.cell(k), n), n);
    const double jac = Determinant(d.cell(k), n);
    out[k] = std::max(0.0, norm_n - K[k] * jac);
  }
  return ScalarField(map.grid_ptr(), std::move(out), true);
}

DistortionReport verify_distortion(const VectorMap& map,
                                   const DistortionData& data,
                                   const VerifyOptions& options) {
  const Grid& g = map.grid();
  if (data.K.size() != g.masked_count()) {
    throw Error("distortion data must be sampled on the map's grid");
  }
  if (!options.excluded.empty() && options.excluded.size() != g.masked_count()) {
    throw Error("exclusion mask has the wrong size");
  }
  const MatrixField d = differential(map);
  const int n = map.dim();

  const ScalarField zero(map.grid_ptr(),
                         std::vector<double>(g.masked_count(), 0.0));
  DistortionReport report{.pointwise_K = zero,
                          .residual_sigma = zero,
                          .violations = {},
                          .holder_exponent = std::nullopt,
                          .rel_tol = options.rel_tol};
  report.max_violation = -kInf;
  report.max_relative_violation = -kInf;

  std::vector<double> pointwise(g.masked_count(), 0.0);
  std::vector<double> residual(g.masked_count(), 0.0);
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double norm_n = std::pow(OperatorNorm(d.cell(k), n), n);
    const double jac = Determinant(d.cell(k), n);
    const double kk = data.K[k];
    if (jac > kJacobianGate * norm_n && jac > 0.0) pointwise[k] = norm_n / jac;
    residual[k] = std::max(0.0, norm_n - kk * jac);
    if (!options.excluded.empty() && options.excluded[k]) continue;
    ++report.checked_cells;

    const double sigma = data.sigma[k];
    if (std::isinf(sigma)) continue;  // the defect dominates
    double weight = 1.0;
    if (options.y0) {
      double dist2 = 0.0;
      for (int i = 0; i < n; ++i) {
        const double diff = map.component(i)[k] - (*options.y0)[i];
        dist2 += diff * diff;
      }
      weight = std::pow(std::sqrt(dist2), n);
    }
    const double rhs = kk * jac + weight * sigma;
    const double excess = norm_n - rhs;
    const double rel = excess / (1.0 + norm_n);
    report.max_violation = std::max(report.max_violation, excess);
    report.max_relative_violation = std::max(report.max_relative_violation, rel);
    if (rel > options.rel_tol) {
      ++report.violation_count;
      report.violations.push_back({k, norm_n, rhs});
    }
  }
  if (report.checked_cells == 0) {
    report.max_violation = 0.0;
    report.max_relative_violation = 0.0;
  }
  report.pointwise_K = ScalarField(map.grid_ptr(), std::move(pointwise), true);
  report.residual_sigma = ScalarField(map.grid_ptr(), std::move(residual), true);

  report.K_norm_p = lp_norm(g, data.K.values(), data.p);
  std::vector<double> ratio;
  ratio.reserve(g.masked_count());
  for (std::size_t k = 0; k < g.masked_count(); ++k) {
    const double s = data.sigma[k];
    const double kk = data.K[k];
    if (std::isinf(s) || (kk == 0.0 && s > 0.0)) {
      ++report.infinite_sigma_cells;
      ratio.push_back(0.0);
    } else {
      ratio.push_back(kk == 0.0 ? 0.0 : s / kk);
    }
  }
  report.sigma_over_K_norm_q = lp_norm(g, ratio, data.q);
  if (std::isinf(data.p)) {
    const double kmax = report.K_norm_p;
    const double from_q = std::isinf(data.q) ? 1.0 : 1.0 - 1.0 / data.q;
    report.holder_exponent =
        std::min(kmax > 0.0 ? 1.0 / kmax : kInf, from_q);
  }
  return report;
}

ZeroIntegralResult zero_integral_check(const VectorMap& map, int i) {
  if (i < 0 || i >= map.dim()) throw Error("coordinate index out of range");
  const JacobianParts parts = jacobian_parts(map);
  ZeroIntegralResult out;
  out.pos_part = integrate(parts.positive);
  out.neg_part = integrate(parts.negative);
  std::vector<double> j(parts.positive.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    j[k] = parts.positive[k] - parts.negative[k];
  }
  out.value = integrate(map.grid(), j);
  out.support_warning = !vanishes_on_boundary(map.component(i));
  return out;
}

ZeroIntegralResult weighted_zero_integral_check(const VectorMap& map, int i,
                                                const MonotoneFn& f) {
  if (i < 0 || i >= map.dim()) throw Error("coordinate index out of range");
  const JacobianParts parts = jacobian_parts(map);
  const ScalarField& fi = map.component(i);
  std::vector<double> weighted(fi.size());
  std::vector<double> pos(fi.size());
  std::vector<double> neg(fi.size());
  for (std::size_t k = 0; k < fi.size(); ++k) {
    const double w = f(std::abs(fi[k]));
    if (!std::isfinite(w)) {
      throw Error("weight F is infinite on an attained value |f_i| = " +
                  std::to_string(std::abs(fi[k])));
    }
    pos[k] = w * parts.positive[k];
    neg[k] = w * parts.negative[k];
    weighted[k] = pos[k] - neg[k];
  }
  ZeroIntegralResult out;
  out.value = integrate(map.grid(), weighted);
  out.pos_part = integrate(map.grid(), pos);
  out.neg_part = integrate(map.grid(), neg);
  out.support_warning = !vanishes_on_boundary(fi);
  return out;
}

DistortionData normalize_low_distortion(const DistortionData& data) {
  std::vector<double> k(data.K.size());
  std::vector<double> s(data.sigma.size());
  for (std::size_t c = 0; c < k.size(); ++c) {
    if (data.K[c] < 0.0) {
      throw Error("normalization requires K >= 0 (cell " + std::to_string(c) +
                  ")");
    }
    k[c] = std::max(1.0, 2.0 * data.K[c]);
    s[c] = 4.0 * data.sigma[c];
  }
  return DistortionData(ScalarField(data.K.grid_ptr(), std::move(k), true),
                        std::move(s), data.p, data.q);
}

}  // namespace fdlab
