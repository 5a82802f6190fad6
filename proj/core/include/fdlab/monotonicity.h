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

#ifndef FDLAB_MONOTONICITY_H_
#define FDLAB_MONOTONICITY_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fdlab/distortion.h"
#include "fdlab/field.h"

namespace fdlab {

// Defects below this fraction of max|field| are treated as zero by fits.
inline constexpr double kDefectFloor = 1e-9;
// Slack on the chain steps that only hold up to discretization error.
inline constexpr double kChainRelTol = 0.02;
// Slack on the chain steps that hold exactly on the grid.
inline constexpr double kChainExactTol = 1e-10;

struct BallExtrema {
  double radius = 0.0;
  double boundary_max = 0.0;  // M(r)
  double boundary_min = 0.0;  // m(r)
  double interior_max = 0.0;
  double interior_min = 0.0;
};

// Boundary extrema come from the sphere trace, interior extrema from masked
// cells with center in the open ball.
BallExtrema ball_extrema(const ScalarField& field, const Ball& ball,
                         int samples);

double awm_defect(const ScalarField& field, const Ball& ball, int samples);
double awm_defect(const BallExtrema& e);

struct DefectSample {
  double radius = 0.0;
  double defect = 0.0;
};

struct DefectFit {
  // True when fewer than three radii carry a positive defect; C and alpha
  // are then 0.
  bool monotone = false;
  double C = 0.0;
  double alpha = 0.0;
  std::vector<double> radii_used;
  double residual = 0.0;  // RMS of the log residuals
  std::vector<DefectSample> samples;
};

DefectFit fit_defect_law(const ScalarField& field, const Point& center,
                         std::span<const double> radii, int samples = 256);

struct OscSample {
  double radius = 0.0;
  double essosc = 0.0;
};

// Oscillation over the masked cells with center in the open ball; 0 when the
// ball holds no cell center.
double essosc(const ScalarField& field, const Point& center, double radius);

std::vector<OscSample> essosc_profile(const ScalarField& field,
                                      const Point& center,
                                      std::span<const double> radii);

// partial[j] = sum_{i <= j} essosc(R 2^-i)^n log 2.
std::vector<double> dyadic_osc_partial_sums(const ScalarField& field,
                                            const Point& center, double R,
                                            int levels);

double dyadic_osc_integral(const ScalarField& field, const Point& center,
                           double R, int levels);

struct ChainCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_tol = 0.0;
  bool holds = true;
};

struct ChainLedger {
  int n = 0;
  int component = 0;
  TruncateMode mode = TruncateMode::kAbove;
  double level = 0.0;
  double p = 0.0;
  double q = 0.0;
  double gamma = 0.0;
  double gamma_q = 0.0;  // gamma q / (q - 1)
  double gamma_p = 0.0;  // p (n - 1 - gamma) / ((n - 1) p - 1)
  double measure = 0.0;  // m_n(Omega)
  bool trivial = false;  // phi vanishes identically

  double sup_phi_n = 0.0;            // ||phi||_inf^n
  double superlevel_integral = 0.0;  // int |grad phi| mu^-(n-1)/n
  double superlevel_rhs = 0.0;       // (1/(n^n w_n)) (...)^n
  double energy = 0.0;               // int |grad phi|^n / (K mu^gamma)
  double K_norm_p = 0.0;
  double T = 0.0;                    // int mu^-gamma_p
  double holder_rhs = 0.0;           // energy ||K||_p T^(n-1-1/p)
  double weighted_jacobian = 0.0;    // int J_g / mu^gamma
  double defect_integral = 0.0;      // int Sigma / (K mu^gamma)
  double sigma_over_K_norm_q = 0.0;
  double Q = 0.0;                    // int mu^-gamma_q
  double energy_bound = 0.0;         // ||Sigma/K||_q Q^(1-1/q)
  double Q_bound = 0.0;              // m^(1-gamma_q) / (1-gamma_q)
  double T_bound = 0.0;              // m^(1-gamma_p) / (1-gamma_p)
  double constant = 0.0;             // C(n, p, q, gamma)
  double measure_exponent = 0.0;     // 1 - 1/p - 1/q
  double final_bound = 0.0;
  // |weighted_jacobian| / energy, 0 when energy is 0.
  double residual_ratio = 0.0;
  std::size_t infinite_sigma_cells = 0;

  std::vector<ChainCheck> checks;
  bool all_hold() const;
};

ChainLedger sup_bound_chain(const VectorMap& map, const DistortionData& data,
                            int component, double level, TruncateMode mode);

struct ModulusSample {
  double radius = 0.0;
  double omega = 0.0;
};

// Running max of |f(x0) - f(x)| over concentric spheres up to each radius.
std::vector<ModulusSample> modulus_curve(const VectorEvaluator& f, int dim,
                                         const Point& x0,
                                         std::span<const double> radii,
                                         int samples);

struct ModulusFit {
  double C = 0.0;
  double beta = 0.0;  // omega ~ C log^-beta(1/r)
  double r_min = 0.0;
  double r_max = 0.0;
  std::size_t points = 0;
  double residual = 0.0;  // RMS of the log residuals
};

ModulusFit log_power_fit(std::span<const ModulusSample> curve);

struct MorreySample {
  double radius = 0.0;
  double oscillation = 0.0;
  double gradient_integral = 0.0;  // int_S |grad phi|^p
  double ratio = 0.0;              // osc^p / (r^(p-(n-1)) int_S |grad phi|^p)
};

// Diagnostic only: no threshold is applied to the ratio.
std::vector<MorreySample> morrey_profile(const ScalarField& field,
                                         const Point& center,
                                         std::span<const double> radii,
                                         double p, int samples);

}  // namespace fdlab

#endif  // FDLAB_MONOTONICITY_H_
