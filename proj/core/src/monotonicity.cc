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

#include "fdlab/monotonicity.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fdlab/distribution.h"
#include "fdlab/error.h"
#include "fdlab/sobolev.h"
#include "fdlab/summation.h"

namespace fdlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double Distance2(const Point& a, const Point& b, int dim) {
  double d = 0.0;
  for (int i = 0; i < dim; ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return d;
}

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double rms = 0.0;
};

LineFit FitLine(std::span<const double> x, std::span<const double> y) {
  const double count = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (sxx == 0.0) throw Error("fit needs at least two distinct abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = y[k] - (fit.intercept + fit.slope * x[k]);
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / count);
  return fit;
}

ChainCheck Check(std::string name, double lhs, double rhs, double tol) {
  ChainCheck c{std::move(name), lhs, rhs, tol, false};
  c.holds = lhs <= rhs * (1.0 + tol) + 1e-300 || (std::isinf(rhs) && rhs > 0);
  return c;
}

}  // namespace

BallExtrema ball_extrema(const ScalarField& field, const Ball& ball,
                         int samples) {
  const std::vector<double> trace = sphere_trace(field, ball, samples);
  BallExtrema e;
  e.radius = ball.radius;
  const auto [lo, hi] = std::minmax_element(trace.begin(), trace.end());
  e.boundary_min = *lo;
  e.boundary_max = *hi;
  const Grid& g = field.grid();
  const double r2 = ball.radius * ball.radius;
  e.interior_max = -kInf;
  e.interior_min = kInf;
  for (std::size_t k = 0; k < field.size(); ++k) {
    if (Distance2(g.masked_center(k), ball.center, g.dim()) < r2) {
      e.interior_max = std::max(e.interior_max, field[k]);
      e.interior_min = std::min(e.interior_min, field[k]);
    }
  }
  if (e.interior_max == -kInf) {
    throw Error("ball of radius " + std::to_string(ball.radius) +
                " contains no cell center");
  }
  return e;
}

double awm_defect(const BallExtrema& e) {
  return std::max({e.interior_max - e.boundary_max,
                   e.boundary_min - e.interior_min, 0.0});
}

double awm_defect(const ScalarField& field, const Ball& ball, int samples) {
  return awm_defect(ball_extrema(field, ball, samples));
}

DefectFit fit_defect_law(const ScalarField& field, const Point& center,
                         std::span<const double> radii, int samples) {
  const double scale = std::max(std::abs(field.max()), std::abs(field.min()));
  DefectFit fit;
  std::vector<double> x;
  std::vector<double> y;
  for (double r : radii) {
    if (!(r > 0.0)) throw Error("radii must be positive");
    const double d = awm_defect(field, Ball{center, r}, samples);
    fit.samples.push_back({r, d});
    if (d > kDefectFloor * scale && d > 0.0) {
      fit.radii_used.push_back(r);
      x.push_back(std::log(r));
      y.push_back(std::log(d));
    }
  }
  if (x.size() < 3) {
    fit.monotone = true;
    return fit;
  }
  const LineFit line = FitLine(x, y);
  fit.alpha = line.slope;
  fit.C = std::exp(line.intercept);
  fit.residual = line.rms;
  return fit;
}

double essosc(const ScalarField& field, const Point& center, double radius) {
  const Grid& g = field.grid();
  const double r2 = radius * radius;
  double hi = -kInf;
  double lo = kInf;
  for (std::size_t k = 0; k < field.size(); ++k) {
    if (Distance2(g.masked_center(k), center, g.dim()) < r2) {
      hi = std::max(hi, field[k]);
      lo = std::min(lo, field[k]);
    }
  }
  return hi == -kInf ? 0.0 : hi - lo;
}

std::vector<OscSample> essosc_profile(const ScalarField& field,
                                      const Point& center,
                                      std::span<const double> radii) {
  std::vector<OscSample> out;
  out.reserve(radii.size());
  for (double r : radii) {
    if (!(r > 0.0)) throw Error("radii must be positive");
    out.push_back({r, essosc(field, center, r)});
  }
  return out;
}

std::vector<double> dyadic_osc_partial_sums(const ScalarField& field,
                                            const Point& center, double R,
                                            int levels) {
  if (!(R > 0.0)) throw Error("dyadic radius R must be positive");
  if (levels < 2) throw Error("dyadic sum needs at least 2 levels");
  const int n = field.grid().dim();
  std::vector<double> partial;
  partial.reserve(levels);
  CompensatedSum sum;
  for (int j = 0; j < levels; ++j) {
    const double osc = essosc(field, center, std::ldexp(R, -j));
    sum += std::pow(osc, n) * std::numbers::ln2;
    partial.push_back(sum.value());
  }
  return partial;
}

double dyadic_osc_integral(const ScalarField& field, const Point& center,
                           double R, int levels) {
  return dyadic_osc_partial_sums(field, center, R, levels).back();
}

bool ChainLedger::all_hold() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ChainCheck& c) { return c.holds; });
}

ChainLedger sup_bound_chain(const VectorMap& map, const DistortionData& data,
                            int component, double level, TruncateMode mode) {
  if (!data.admissible()) {
    throw Error("exponents are not admissible: need 1/p + 1/q < 1");
  }
  if (component < 0 || component >= map.dim()) {
    throw Error("coordinate index out of range");
  }
  if (!std::isfinite(level)) throw Error("truncation level must be finite");
  const Grid& grid = map.grid();
  if (data.K.size() != grid.masked_count()) {
    throw Error("distortion data must be sampled on the map's grid");
  }
  for (std::size_t k = 0; k < data.K.size(); ++k) {
    if (data.K[k] < 1.0) {
      throw Error("chain needs K >= 1 (cell " + std::to_string(k) +
                  "); normalize low distortion first");
    }
  }

  const int n = map.dim();
  const double inv_p = 1.0 / data.p;
  const double inv_q = 1.0 / data.q;
  ChainLedger L;
  L.n = n;
  L.component = component;
  L.mode = mode;
  L.level = level;
  L.p = data.p;
  L.q = data.q;
  L.gamma = 0.5 * (inv_p + 1.0 - inv_q);
  L.gamma_q = std::isinf(data.q) ? L.gamma : L.gamma * data.q / (data.q - 1.0);
  L.gamma_p = std::isinf(data.p)
                  ? (n - 1.0 - L.gamma) / (n - 1.0)
                  : data.p * (n - 1.0 - L.gamma) / ((n - 1.0) * data.p - 1.0);
  L.measure = grid.measure();
  L.measure_exponent = 1.0 - inv_p - inv_q;
  const double q_exp = 1.0 - inv_q;
  const double t_exp = n - 1.0 - inv_p;
  L.Q_bound = std::pow(L.measure, 1.0 - L.gamma_q) / (1.0 - L.gamma_q);
  L.T_bound = std::pow(L.measure, 1.0 - L.gamma_p) / (1.0 - L.gamma_p);
  const double prefactor =
      1.0 / (std::pow(static_cast<double>(n), n) * unit_ball_volume(n));
  L.constant = prefactor * std::pow(1.0 / (1.0 - L.gamma_q), q_exp) *
               std::pow(1.0 / (1.0 - L.gamma_p), t_exp);

  const ScalarField phi = truncate(map.component(component), level, mode);
  if (phi.max() == 0.0) {
    L.trivial = true;
    for (const char* name : {"superlevel", "holder", "energy_identity",
                             "defect_holder", "energy_bound", "Q_integral",
                             "T_integral", "final_bound"}) {
      L.checks.push_back(Check(name, 0.0, 0.0, 0.0));
    }
    return L;
  }

  const StepDistribution dist = upper_distribution(phi);
  const std::vector<double> mu = upper_of_field(phi, dist);
  const ScalarField grad = magnitude(gradient(phi));
  std::vector<double> g_comp(phi.values().begin(), phi.values().end());
  if (mode == TruncateMode::kBelow) {
    for (double& v : g_comp) v = -v;
  }
  const VectorMap g =
      map.with_component(component, ScalarField(map.grid_ptr(), g_comp));
  const ScalarField jg = jacobian(differential(g));

  const double cv = grid.cell_volume();
  CompensatedSum superlevel, energy, t_sum, w_sum, d_sum, q_sum;
  bool defect_infinite = false;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const double K = data.K[k];
    const double sigma = data.sigma[k];
    superlevel += grad[k] * std::pow(mu[k], -(n - 1.0) / n);
    const double mu_gamma = std::pow(mu[k], L.gamma);
    energy += std::pow(grad[k], n) / (K * mu_gamma);
    t_sum += std::pow(mu[k], -L.gamma_p);
    q_sum += std::pow(mu[k], -L.gamma_q);
    w_sum += jg[k] / mu_gamma;
    if (std::isinf(sigma)) {
      defect_infinite = true;
      ++L.infinite_sigma_cells;
    } else {
      d_sum += sigma / (K * mu_gamma);
    }
  }
  L.sup_phi_n = std::pow(dist.max_level(), n);
  L.superlevel_integral = cv * superlevel.value();
  L.superlevel_rhs = prefactor * std::pow(L.superlevel_integral, n);
  L.energy = cv * energy.value();
  L.T = cv * t_sum.value();
  L.Q = cv * q_sum.value();
  L.weighted_jacobian = cv * w_sum.value();
  L.defect_integral = defect_infinite ? kInf : cv * d_sum.value();
  L.K_norm_p = lp_norm(grid, data.K.values(), data.p);
  L.holder_rhs = L.energy * L.K_norm_p * std::pow(L.T, t_exp);

  if (defect_infinite) {
    L.sigma_over_K_norm_q = kInf;
  } else {
    std::vector<double> ratio(phi.size());
    for (std::size_t k = 0; k < ratio.size(); ++k) {
      ratio[k] = data.sigma[k] / data.K[k];
    }
    L.sigma_over_K_norm_q = lp_norm(grid, ratio, data.q);
  }
  L.energy_bound = L.sigma_over_K_norm_q * std::pow(L.Q, q_exp);
  L.final_bound = L.constant * L.K_norm_p * L.sigma_over_K_norm_q *
                  std::pow(L.measure, L.measure_exponent);
  L.residual_ratio =
      L.energy > 0.0 ? std::abs(L.weighted_jacobian) / L.energy : 0.0;

  L.checks.push_back(
      Check("superlevel", L.sup_phi_n, L.superlevel_rhs, kChainRelTol));
  L.checks.push_back(Check("holder", std::pow(L.superlevel_integral, n),
                           L.holder_rhs, kChainExactTol));
  L.checks.push_back(Check("energy_identity", L.energy,
                           L.weighted_jacobian + L.defect_integral,
                           kChainRelTol));
  L.checks.push_back(Check("defect_holder", L.defect_integral, L.energy_bound,
                           kChainExactTol));
  L.checks.push_back(
      Check("energy_bound", L.energy, L.energy_bound, kChainRelTol));
  L.checks.push_back(Check("Q_integral", L.Q, L.Q_bound, kChainExactTol));
  L.checks.push_back(Check("T_integral", L.T, L.T_bound, kChainExactTol));
  L.checks.push_back(
      Check("final_bound", L.sup_phi_n, L.final_bound, kChainRelTol));
  return L;
}

std::vector<ModulusSample> modulus_curve(const VectorEvaluator& f, int dim,
                                         const Point& x0,
                                         std::span<const double> radii,
                                         int samples) {
  if (dim < 2 || dim > kMaxDim) throw Error("dimension must be 2 or 3");
  std::vector<double> sorted(radii.begin(), radii.end());
  for (double r : sorted) {
    if (!(r > 0.0)) throw Error("radii must be positive");
  }
  std::sort(sorted.begin(), sorted.end());
  const Point y0 = f(x0);
  constexpr int kShells = 4;
  std::vector<ModulusSample> out;
  out.reserve(sorted.size());
  double running = 0.0;
  double prev = 0.0;
  for (double r : sorted) {
    for (int s = 1; s <= kShells; ++s) {
      const double rho = prev + (r - prev) * s / kShells;
      for (const Point& x : sphere_points(Ball{x0, rho}, dim, samples)) {
        const Point y = f(x);
        running = std::max(running, std::sqrt(Distance2(y, y0, dim)));
      }
    }
    out.push_back({r, running});
    prev = r;
  }
  return out;
}

ModulusFit log_power_fit(std::span<const ModulusSample> curve) {
  std::vector<double> x;
  std::vector<double> y;
  ModulusFit fit;
  fit.r_min = kInf;
  fit.r_max = 0.0;
  for (const ModulusSample& s : curve) {
    if (!(s.radius > 0.0 && s.radius < 1.0 && s.omega > 0.0)) continue;
    x.push_back(std::log(std::log(1.0 / s.radius)));
    y.push_back(std::log(s.omega));
    fit.r_min = std::min(fit.r_min, s.radius);
    fit.r_max = std::max(fit.r_max, s.radius);
  }
  if (x.size() < 3) {
    throw Error("log-power fit needs at least 3 points with r < 1, omega > 0");
  }
  const LineFit line = FitLine(x, y);
  fit.beta = -line.slope;
  fit.C = std::exp(line.intercept);
  fit.points = x.size();
  fit.residual = line.rms;
  return fit;
}

std::vector<MorreySample> morrey_profile(const ScalarField& field,
                                         const Point& center,
                                         std::span<const double> radii,
                                         double p, int samples) {
  const int n = field.grid().dim();
  if (!(p > n - 1.0) || !std::isfinite(p)) {
    throw Error("Morrey exponent must be finite and exceed n - 1");
  }
  const ScalarField grad = magnitude(gradient(field));
  std::vector<MorreySample> out;
  for (double r : radii) {
    const Ball ball{center, r};
    const std::vector<double> trace = sphere_trace(field, ball, samples);
    const std::vector<double> gtrace = sphere_trace(grad, ball, samples);
    const auto [lo, hi] = std::minmax_element(trace.begin(), trace.end());
    CompensatedSum sum;
    for (double v : gtrace) sum += std::pow(v, p);
    const double area = n * unit_ball_volume(n) * std::pow(r, n - 1.0);
    MorreySample s;
    s.radius = r;
    s.oscillation = *hi - *lo;
    s.gradient_integral = area * sum.value() / gtrace.size();
    const double denom = std::pow(r, p - (n - 1.0)) * s.gradient_integral;
    const double num = std::pow(s.oscillation, p);
    s.ratio = denom > 0.0 ? num / denom : (num > 0.0 ? kInf : 0.0);
    out.push_back(s);
  }
  return out;
}

}  // namespace fdlab
