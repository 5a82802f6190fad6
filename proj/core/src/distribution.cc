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

#include "fdlab/distribution.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fdlab/error.h"
#include "fdlab/summation.h"

namespace fdlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Slack for ordering checks between exactly-ordered quantities.
constexpr double kOrderSlack = 1e-12;

void RequireNonnegative(const ScalarField& field) {
  const auto v = field.values();
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] < 0.0) {
      const Point x = field.grid().masked_center(k);
      std::ostringstream msg;
      msg << "field has a negative value " << v[k] << " at cell " << k
          << " (" << x[0] << ", " << x[1];
      if (field.grid().dim() == 3) msg << ", " << x[2];
      msg << ")";
      throw Error(msg.str());
    }
  }
}

Relation Compare(double value, double bound) {
  if (std::isinf(value)) return Relation::kDivergent;
  if (value <= bound * (1.0 + kOrderSlack)) return Relation::kBelowOrEqual;
  return Relation::kAboveOrEqual;
}

}  // namespace

StepDistribution::StepDistribution(std::vector<double> levels,
                                   std::vector<std::size_t> counts,
                                   double cell_volume)
    : levels_(std::move(levels)),
      counts_(std::move(counts)),
      cell_volume_(cell_volume) {
  if (levels_.empty() || levels_.size() != counts_.size()) {
    throw Error("step distribution needs matching nonempty levels and counts");
  }
  if (!(cell_volume_ > 0.0)) throw Error("cell volume must be positive");
  for (std::size_t j = 0; j < levels_.size(); ++j) {
    if (counts_[j] == 0) throw Error("step distribution masses must be > 0");
    if (j > 0 && !(levels_[j] > levels_[j - 1])) {
      throw Error("step distribution levels must be strictly increasing");
    }
  }
  suffix_.assign(levels_.size() + 1, 0);
  for (std::size_t j = levels_.size(); j-- > 0;) {
    suffix_[j] = suffix_[j + 1] + counts_[j];
  }
  total_count_ = suffix_[0];
}

double StepDistribution::upper(double t) const {
  // First level >= t.
  const auto it = std::lower_bound(levels_.begin(), levels_.end(), t);
  return suffix_[static_cast<std::size_t>(it - levels_.begin())] *
         cell_volume_;
}

double StepDistribution::lower(double t) const {
  // First level > t.
  const auto it = std::upper_bound(levels_.begin(), levels_.end(), t);
  return suffix_[static_cast<std::size_t>(it - levels_.begin())] *
         cell_volume_;
}

std::size_t StepDistribution::level_index(double v) const {
  const auto it = std::lower_bound(levels_.begin(), levels_.end(), v);
  if (it == levels_.end() || *it != v) {
    throw Error("value is not a sampled level");
  }
  return static_cast<std::size_t>(it - levels_.begin());
}

StepDistribution upper_distribution(const ScalarField& field) {
  RequireNonnegative(field);
  std::vector<double> sorted(field.values().begin(), field.values().end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> levels;
  std::vector<std::size_t> counts;
  for (double v : sorted) {
    if (levels.empty() || v != levels.back()) {
      levels.push_back(v);
      counts.push_back(1);
    } else {
      ++counts.back();
    }
  }
  return StepDistribution(std::move(levels), std::move(counts),
                          field.grid().cell_volume());
}

StepDistribution lower_distribution(const ScalarField& field) {
  return upper_distribution(field);
}

std::vector<double> upper_of_field(const ScalarField& field,
                                   const StepDistribution& dist) {
  std::vector<double> out(field.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = dist.upper_at(dist.level_index(field[k]));
  }
  return out;
}

double CavalieriResult::max_relative_residual() const {
  const double scale =
      std::max({std::abs(integral), std::abs(area_upper), std::abs(area_lower)});
  if (scale == 0.0) return 0.0;
  const double d = std::max({std::abs(integral - area_upper),
                             std::abs(integral - area_lower),
                             std::abs(area_upper - area_lower)});
  return d / scale;
}

CavalieriResult cavalieri_residual(const ScalarField& field) {
  const StepDistribution dist = upper_distribution(field);
  CavalieriResult out;
  out.integral = integrate(field);
  // upper is constant on (v_{j-1}, v_j] and lower on [v_{j-1}, v_j), with
  // v_{-1} = 0; both vanish beyond the top level.
  CompensatedSum up;
  CompensatedSum lo;
  double prev = 0.0;
  for (std::size_t j = 0; j < dist.level_count(); ++j) {
    const double v = dist.levels()[j];
    const double width = v - prev;
    if (width > 0.0) {
      up += width * dist.upper(v);
      lo += width * dist.lower(prev);
    }
    prev = v;
  }
  out.area_upper = up.value();
  out.area_lower = lo.value();
  return out;
}

std::vector<LevelBoundReport> verify_level_bounds(
    const ScalarField& field, std::span<const double> a_values) {
  const StepDistribution dist = upper_distribution(field);
  const double total = dist.total();
  std::vector<LevelBoundReport> out;
  out.reserve(a_values.size());
  for (double a : a_values) {
    if (!(a >= 0.0 && a <= total)) {
      std::ostringstream msg;
      msg << "level-bound parameter a = " << a << " outside [0, " << total
          << "]";
      throw Error(msg.str());
    }
    std::size_t lower_count = 0;
    std::size_t upper_count = 0;
    for (std::size_t j = 0; j < dist.level_count(); ++j) {
      if (dist.lower_at(j) <= a) lower_count += dist.counts()[j];
      if (dist.upper_at(j) < a) upper_count += dist.counts()[j];
    }
    LevelBoundReport r;
    r.a = a;
    r.lower_set_measure = lower_count * dist.cell_volume();
    r.upper_set_measure = upper_count * dist.cell_volume();
    r.lower_holds = r.lower_set_measure >= a;
    r.upper_holds = r.upper_set_measure <= a;
    out.push_back(r);
  }
  return out;
}

const char* ToString(Relation r) {
  switch (r) {
    case Relation::kBelowOrEqual:
      return "below_or_equal";
    case Relation::kAboveOrEqual:
      return "above_or_equal";
    case Relation::kDivergent:
      return "divergent";
    case Relation::kNotApplicable:
      return "not_applicable";
  }
  return "unknown";
}

PowerIntegralResult neg_power_integral(const StepDistribution& dist,
                                       double gamma, Which which) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error("negative-power exponent gamma must be positive");
  }
  PowerIntegralResult out;
  CompensatedSum sum;
  CompensatedSum trimmed;
  bool divergent = false;
  const std::size_t top = dist.level_count() - 1;
  for (std::size_t j = 0; j < dist.level_count(); ++j) {
    const double mu = which == Which::kUpper ? dist.upper_at(j)
                                             : dist.lower_at(j);
    if (mu == 0.0) {
      divergent = true;
      continue;
    }
    const double term = dist.mass(j) * std::pow(mu, -gamma);
    sum += term;
    if (j != top) trimmed += term;
  }
  out.value = divergent ? kInf : sum.value();
  out.trimmed_value = trimmed.value();
  if (which == Which::kUpper) out.trimmed_value = out.value;
  if (gamma < 1.0) {
    out.bound = std::pow(dist.total(), 1.0 - gamma) / (1.0 - gamma);
    out.relation = Compare(out.value, out.bound);
    if (which == Which::kUpper) {
      out.matches_expected = out.relation == Relation::kBelowOrEqual;
    } else {
      out.matches_expected = out.relation == Relation::kDivergent ||
                          out.value >= out.bound * (1.0 - kOrderSlack);
      if (out.matches_expected && out.relation == Relation::kBelowOrEqual) {
        out.relation = Relation::kAboveOrEqual;
      }
    }
  } else {
    out.bound = kInf;
    if (which == Which::kLower) {
      out.relation = divergent ? Relation::kDivergent : Relation::kAboveOrEqual;
      out.matches_expected = divergent;
    } else {
      out.relation = Relation::kNotApplicable;
      out.matches_expected = true;
    }
  }
  return out;
}

PowerIntegralResult neg_power_integral(const ScalarField& field, double gamma,
                                       Which which) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error("negative-power exponent gamma must be positive");
  }
  return neg_power_integral(upper_distribution(field), gamma, which);
}

PowerIntegralResult pos_power_integral(const StepDistribution& dist, double r,
                                       Which which) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw Error("positive-power exponent r must be positive");
  }
  PowerIntegralResult out;
  CompensatedSum sum;
  for (std::size_t j = 0; j < dist.level_count(); ++j) {
    const double mu = which == Which::kUpper ? dist.upper_at(j)
                                             : dist.lower_at(j);
    sum += dist.mass(j) * std::pow(mu, r);
  }
  out.value = sum.value();
  out.trimmed_value = out.value;
  out.bound = std::pow(dist.total(), 1.0 + r) / (1.0 + r);
  if (which == Which::kLower) {
    out.relation = Compare(out.value, out.bound);
    out.matches_expected = out.relation == Relation::kBelowOrEqual;
  } else {
    out.matches_expected = out.value >= out.bound * (1.0 - kOrderSlack);
    out.relation = out.matches_expected ? Relation::kAboveOrEqual
                                     : Relation::kBelowOrEqual;
  }
  return out;
}

PowerIntegralResult pos_power_integral(const ScalarField& field, double r,
                                       Which which) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw Error("positive-power exponent r must be positive");
  }
  return pos_power_integral(upper_distribution(field), r, which);
}

}  // namespace fdlab
