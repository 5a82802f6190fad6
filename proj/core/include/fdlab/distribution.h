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

#ifndef FDLAB_DISTRIBUTION_H_
#define FDLAB_DISTRIBUTION_H_

#include <cstddef>
#include <span>
#include <vector>

#include "fdlab/field.h"

namespace fdlab {

// Exact distribution functions of a sampled nonnegative field.
//
// levels are the distinct sampled values v_1 < ... < v_m and counts the
// number of cells attaining each. Measures are integer counts times the cell
// volume, so comparisons between them are exact.
//
//   upper(t) = m({phi >= t}),  non-increasing, left-continuous
//   lower(t) = m({phi >  t}),  non-increasing, right-continuous
class StepDistribution {
 public:
  StepDistribution(std::vector<double> levels, std::vector<std::size_t> counts,
                   double cell_volume);

  std::span<const double> levels() const { return levels_; }
  std::span<const std::size_t> counts() const { return counts_; }
  std::size_t level_count() const { return levels_.size(); }
  double cell_volume() const { return cell_volume_; }
  double mass(std::size_t j) const { return counts_[j] * cell_volume_; }
  double total() const { return total_count_ * cell_volume_; }
  double max_level() const { return levels_.back(); }

  double upper(double t) const;
  double lower(double t) const;
  // upper/lower evaluated at the j-th level.
  double upper_at(std::size_t j) const { return suffix_[j] * cell_volume_; }
  double lower_at(std::size_t j) const {
    return suffix_[j + 1] * cell_volume_;
  }
  std::size_t count_at_least(std::size_t j) const { return suffix_[j]; }

  // Index of the level equal to v (v must be a sampled value).
  std::size_t level_index(double v) const;

 private:
  std::vector<double> levels_;
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> suffix_;  // suffix_[j] = sum_{i >= j} counts_[i]
  std::size_t total_count_;
  double cell_volume_;
};

StepDistribution upper_distribution(const ScalarField& field);
// Same step data as upper_distribution; provided for symmetry of call sites.
StepDistribution lower_distribution(const ScalarField& field);

// Per-cell upper(phi(x)) for every masked cell.
std::vector<double> upper_of_field(const ScalarField& field,
                                   const StepDistribution& dist);

struct CavalieriResult {
  double integral = 0.0;
  double area_upper = 0.0;
  double area_lower = 0.0;
  double max_relative_residual() const;
};

CavalieriResult cavalieri_residual(const ScalarField& field);

struct LevelBoundReport {
  double a = 0.0;
  double lower_set_measure = 0.0;  // m({lower(phi) <= a}), must be >= a
  double upper_set_measure = 0.0;  // m({upper(phi) <  a}), must be <= a
  bool lower_holds = false;
  bool upper_holds = false;
};

std::vector<LevelBoundReport> verify_level_bounds(
    const ScalarField& field, std::span<const double> a_values);

enum class Which { kUpper, kLower };

// Where the computed integral falls relative to the closed-form bound.
enum class Relation {
  kBelowOrEqual,   // value <= bound
  kAboveOrEqual,   // value >= bound
  kDivergent,      // value is +infinity
  kNotApplicable,  // no finite bound for this exponent
};

const char* ToString(Relation r);

struct PowerIntegralResult {
  double value = 0.0;
  // Value with the top level excluded; differs from `value` only when the
  // lower distribution vanishes there.
  double trimmed_value = 0.0;
  double bound = 0.0;
  Relation relation = Relation::kNotApplicable;
  // Whether `relation` is the one the integral inequality predicts.
  bool matches_expected = false;
};

// Integral of lower/upper(phi)^(-gamma) against the comparison value
// total^(1-gamma) / (1-gamma).
PowerIntegralResult neg_power_integral(const ScalarField& field, double gamma,
                                       Which which);
PowerIntegralResult neg_power_integral(const StepDistribution& dist,
                                       double gamma, Which which);

// Integral of lower/upper(phi)^r against total^(1+r) / (1+r).
PowerIntegralResult pos_power_integral(const ScalarField& field, double r,
                                       Which which);
PowerIntegralResult pos_power_integral(const StepDistribution& dist, double r,
                                       Which which);

}  // namespace fdlab

#endif  // FDLAB_DISTRIBUTION_H_
