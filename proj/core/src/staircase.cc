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

#include "fdlab/staircase.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fdlab/error.h"

namespace fdlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBisectionTol = 1e-12;
constexpr int kMaxDoublings = 1100;

// Bisection for sup{t : F(t) < target} on [lo, hi] with F(lo) < target and
// F(hi) >= target.
double BisectBelow(const std::function<double(double)>& f, double lo,
                   double hi, double target) {
  while (hi - lo > kBisectionTol * std::max(1.0, std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < target ? lo : hi) = mid;
  }
  return lo;
}

class Scanner {
 public:
  Scanner(const MonotoneFn& f, double s) : f_(f), s_(s) {}

  // sup{t in [0, s] : F(t) <= threshold}, given that F(prev) <= threshold.
  double Sup(double threshold, double prev) {
    if (std::isfinite(s_) && f_(s_) <= threshold) return s_;
    if (f_.is_step()) return StepSup(threshold);
    return AnalyticSup(threshold, prev);
  }

 private:
  double StepSup(double threshold) const {
    const auto values = f_.values();
    const auto knots = f_.knots();
    // First piece exceeding the threshold; piece 0 holds F(0) <= threshold.
    const auto it = std::upper_bound(values.begin(), values.end(), threshold);
    if (it == values.end()) return s_;
    const auto j = static_cast<std::size_t>(it - values.begin());
    return std::min(knots[j - 1], s_);
  }

  double AnalyticSup(double threshold, double lo) {
    double flo = f_(lo);
    double hi;
    if (std::isfinite(s_)) {
      hi = s_;
    } else {
      hi = std::max(1.0, 2.0 * lo);
      int doublings = 0;
      while (f_(hi) <= threshold) {
        Probe(flo, hi);
        lo = hi;
        flo = f_(hi);
        hi *= 2.0;
        if (++doublings > kMaxDoublings || !std::isfinite(hi)) return kInf;
      }
    }
    double fhi = f_(hi);
    while (hi - lo > kBisectionTol * std::max(1.0, std::abs(hi))) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double fm = f_(mid);
      if (fm < flo || fm > fhi) {
        throw Error("function is not non-decreasing (probe violation)");
      }
      if (fm <= threshold) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
        fhi = fm;
      }
    }
    return lo;
  }

  void Probe(double fa, double b) const {
    if (f_(b) < fa) {
      throw Error("function is not non-decreasing (probe violation)");
    }
  }

  const MonotoneFn& f_;
  double s_;
};

}  // namespace

MonotoneFn MonotoneFn::Step(std::vector<double> knots,
                            std::vector<double> values, double at_infinity) {
  if (values.size() != knots.size() + 1) {
    throw Error("step function needs one more value than knots");
  }
  for (std::size_t j = 0; j < knots.size(); ++j) {
    if (!(knots[j] >= 0.0) || !std::isfinite(knots[j])) {
      throw Error("step knots must be finite and nonnegative");
    }
    if (j > 0 && !(knots[j] > knots[j - 1])) {
      throw Error("step knots must be strictly increasing");
    }
  }
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (std::isnan(values[j]) || values[j] < 0.0) {
      throw Error("step values must be nonnegative");
    }
    if (j > 0 && values[j] < values[j - 1]) {
      throw Error("step function is not non-decreasing");
    }
  }
  if (at_infinity < values.back()) {
    throw Error("F(inf) must bound the range of F");
  }
  MonotoneFn f;
  f.knots_ = std::move(knots);
  f.values_ = std::move(values);
  f.at_infinity_ = at_infinity;
  return f;
}

MonotoneFn MonotoneFn::Analytic(std::function<double(double)> fn,
                                double at_infinity, std::optional<double> s) {
  if (!fn) throw Error("analytic monotone function needs a callable");
  MonotoneFn f;
  f.analytic_ = std::move(fn);
  f.at_infinity_ = at_infinity;
  f.s_hint_ = s;
  return f;
}

double MonotoneFn::operator()(double t) const {
  if (t == kInf) return at_infinity_;
  if (analytic_) return analytic_(t);
  const auto it = std::lower_bound(knots_.begin(), knots_.end(), t);
  return values_[static_cast<std::size_t>(it - knots_.begin())];
}

double MonotoneFn::support_end() const {
  if (s_hint_) return *s_hint_;
  const double top = at_infinity_;
  if (!analytic_) {
    if (values_.back() < top) return kInf;
    const auto it = std::lower_bound(values_.begin(), values_.end(), top);
    const auto j = static_cast<std::size_t>(it - values_.begin());
    return j == 0 ? 0.0 : knots_[j - 1];
  }
  if (analytic_(0.0) >= top) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int k = 0; k < kMaxDoublings; ++k) {
    if (analytic_(hi) >= top) return BisectBelow(analytic_, lo, hi, top);
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) break;
  }
  return kInf;
}

MonotoneFn InverseUpperPower(const StepDistribution& dist, double gamma) {
  if (!(gamma > 0.0)) throw Error("gamma must be positive");
  std::vector<double> knots(dist.levels().begin(), dist.levels().end());
  std::vector<double> values(knots.size() + 1);
  for (std::size_t j = 0; j < knots.size(); ++j) {
    values[j] = std::pow(dist.upper_at(j), -gamma);
  }
  values.back() = kInf;
  return MonotoneFn::Step(std::move(knots), std::move(values), kInf);
}

const char* ToString(StaircaseCase c) {
  switch (c) {
    case StaircaseCase::kEmpty:
      return "empty";
    case StaircaseCase::kInterior:
      return "interior";
    case StaircaseCase::kHit:
      return "hit";
  }
  return "unknown";
}

StaircaseResult staircase_approx(const MonotoneFn& f, double epsilon,
                                 int max_steps) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error("staircase epsilon must be positive");
  }
  if (max_steps < 0) throw Error("max_steps must be nonnegative");
  const double f0 = f(0.0);
  if (!std::isfinite(f0)) throw Error("staircase requires F(0) < infinity");

  StaircaseResult out;
  out.epsilon = epsilon;
  out.s = f.support_end();
  out.breakpoints.push_back(0.0);
  out.values.push_back(f0);
  if (!(out.s > 0.0)) {
    out.s = 0.0;
    out.kind = StaircaseCase::kEmpty;
    return out;
  }

  Scanner scan(f, out.s);
  const auto emitted = [&] {
    return static_cast<int>(out.breakpoints.size()) - 1;
  };
  double prev = 0.0;  // t'_{i-1}
  double i = 1.0;
  out.kind = StaircaseCase::kInterior;
  while (emitted() < max_steps) {
    const double t = scan.Sup(f0 + i * epsilon, prev);
    if (t >= out.s) {
      out.kind = StaircaseCase::kHit;
      break;
    }
    if (t > prev) {
      out.breakpoints.push_back(t);
      out.values.push_back(f(t));
      prev = t;
    }
    if (f.is_step()) {
      // Jump straight to the first threshold that moves past the piece
      // following t; intermediate thresholds repeat t.
      const double next_value = f(std::nextafter(t, kInf));
      const double needed = std::ceil((next_value - f0) / epsilon);
      i = std::max(i + 1.0, std::isfinite(needed) ? needed : i + 1.0);
      while (i > 1.0 && f0 + (i - 1.0) * epsilon >= next_value) i -= 1.0;
    } else {
      i += 1.0;
    }
  }

  if (out.kind == StaircaseCase::kHit) {
    const double base = prev;
    for (int j = 1; emitted() < max_steps; ++j) {
      double t;
      if (std::isfinite(out.s)) {
        t = base + (out.s - base) * (1.0 - std::ldexp(1.0, -j));
      } else {
        t = base + std::ldexp(1.0, j) - 1.0;
      }
      if (!(t > out.breakpoints.back()) || !(t < out.s)) break;
      out.breakpoints.push_back(t);
      out.values.push_back(f(t));
    }
  }
  return out;
}

StaircaseResult inverse_distribution_staircase(const ScalarField& field,
                                               double gamma, double epsilon,
                                               int max_steps) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error("gamma must be positive");
  }
  const StepDistribution dist = upper_distribution(field);
  if (!(dist.max_level() > 0.0)) {
    throw Error("staircase of a zero field is undefined");
  }
  return staircase_approx(InverseUpperPower(dist, gamma), epsilon, max_steps);
}

double max_gap_deviation(const MonotoneFn& f, const StaircaseResult& result) {
  double worst = 0.0;
  const auto& t = result.breakpoints;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double fi = f(t[i]);
    const double a = t[i - 1];
    const double b = t[i];
    std::vector<double> probes = {b, std::nextafter(a, kInf), 0.5 * (a + b)};
    if (f.is_step()) {
      const auto knots = f.knots();
      auto lo = std::upper_bound(knots.begin(), knots.end(), a);
      auto hi = std::upper_bound(knots.begin(), knots.end(), b);
      double left = a;
      for (auto it = lo; it != hi; ++it) {
        probes.push_back(*it);
        probes.push_back(0.5 * (left + *it));
        left = *it;
      }
    }
    for (double p : probes) {
      if (p > a && p <= b) worst = std::max(worst, std::abs(fi - f(p)));
    }
  }
  return worst;
}

}  // namespace fdlab
