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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "fdlab/distribution.h"
#include "fdlab/error.h"
#include "fdlab/staircase.h"
#include "support.h"

namespace fdlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Every knot, a point just right of every knot, and gap midpoints: the
// places where a step function can take a new value.
std::vector<double> ScanPoints(const MonotoneFn& f, double a, double b) {
  std::vector<double> pts = {b, std::nextafter(a, kInf), 0.5 * (a + b)};
  for (double k : f.knots()) {
    if (k > a && k <= b) {
      pts.push_back(k);
      pts.push_back(std::nextafter(k, kInf));
    }
  }
  return pts;
}

// Independent check of |F(t_i) - F(t)| <= eps on every gap (t_{i-1}, t_i].
std::size_t GapViolations(const MonotoneFn& f, const StaircaseResult& r) {
  std::size_t bad = 0;
  for (std::size_t i = 1; i < r.breakpoints.size(); ++i) {
    const double a = r.breakpoints[i - 1];
    const double b = r.breakpoints[i];
    for (double t : ScanPoints(f, a, b)) {
      if (t > a && t <= b && std::abs(f(b) - f(t)) > r.epsilon) ++bad;
    }
  }
  return bad;
}

MonotoneFn RandomStep(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 30);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = count(rng);
  std::vector<double> knots;
  double t = 0.0;
  for (int j = 0; j < n; ++j) {
    t += 0.01 + u(rng);
    knots.push_back(t);
  }
  std::vector<double> values;
  double v = u(rng);
  for (int j = 0; j <= n; ++j) {
    values.push_back(v);
    v += u(rng) < 0.3 ? 0.0 : std::pow(10.0, 2.0 * u(rng) - 1.0);
  }
  const double top = u(rng) < 0.5 ? values.back() : values.back() + 1.0;
  return MonotoneFn::Step(knots, values, top);
}

TEST(MonotoneFn, StepIsLeftContinuous) {
  const MonotoneFn f = MonotoneFn::Step({1.0, 2.0}, {0.0, 1.0, 3.0}, 3.0);
  EXPECT_EQ(f(0.0), 0.0);
  EXPECT_EQ(f(1.0), 0.0);
  EXPECT_EQ(f(1.5), 1.0);
  EXPECT_EQ(f(2.0), 1.0);
  EXPECT_EQ(f(2.5), 3.0);
  EXPECT_EQ(f(kInf), 3.0);
  EXPECT_EQ(f.support_end(), 2.0);
}

TEST(MonotoneFn, RejectsMalformedSteps) {
  EXPECT_THROW(MonotoneFn::Step({1.0}, {0.0}, 1.0), Error);
  EXPECT_THROW(MonotoneFn::Step({2.0, 1.0}, {0.0, 1.0, 2.0}, 2.0), Error);
  EXPECT_THROW(MonotoneFn::Step({1.0}, {2.0, 1.0}, 2.0), Error);
  EXPECT_THROW(MonotoneFn::Step({1.0}, {0.0, 2.0}, 1.0), Error);
}

TEST(Staircase, IdentityInteriorCase) {
  const MonotoneFn f = MonotoneFn::Analytic([](double t) { return t; }, kInf);
  const StaircaseResult r = staircase_approx(f, 1.0, 10);
  EXPECT_EQ(r.kind, StaircaseCase::kInterior);
  EXPECT_TRUE(std::isinf(r.s));
  ASSERT_EQ(r.breakpoints.size(), 11u);
  for (std::size_t i = 0; i < r.breakpoints.size(); ++i) {
    EXPECT_NEAR(r.breakpoints[i], static_cast<double>(i), 1e-10);
  }
}

TEST(Staircase, TwoLevelHitCase) {
  const MonotoneFn f = MonotoneFn::Step({1.0}, {0.0, 2.0}, 2.0);
  const StaircaseResult r = staircase_approx(f, 0.5, 20);
  EXPECT_EQ(r.kind, StaircaseCase::kHit);
  EXPECT_EQ(r.s, 1.0);
  ASSERT_EQ(r.breakpoints.size(), 21u);
  for (std::size_t j = 1; j < r.breakpoints.size(); ++j) {
    EXPECT_DOUBLE_EQ(r.breakpoints[j], 1.0 - std::ldexp(1.0, -static_cast<int>(j)));
    EXPECT_LT(r.breakpoints[j], 1.0);
  }
  EXPECT_EQ(GapViolations(f, r), 0u);
  EXPECT_EQ(max_gap_deviation(f, r), 0.0);
}

TEST(Staircase, EmptyCase) {
  const MonotoneFn f = MonotoneFn::Step({}, {1.0}, 1.0);
  const StaircaseResult r = staircase_approx(f, 0.1, 10);
  EXPECT_EQ(r.kind, StaircaseCase::kEmpty);
  EXPECT_EQ(r.breakpoints.size(), 1u);
}

TEST(Staircase, DistributionDerivedStepFunction) {
  std::mt19937_64 rng(31);
  const GridPtr g = testing::Square(32);
  for (int trial = 0; trial < 20; ++trial) {
    const ScalarField phi = testing::RandomField(g, rng);
    const StepDistribution d = upper_distribution(phi);
    // F(t) = total - upper(t) is left-continuous and non-decreasing.
    std::vector<double> knots(d.levels().begin(), d.levels().end());
    std::vector<double> values;
    for (std::size_t j = 0; j < knots.size(); ++j) {
      values.push_back(d.total() - d.upper_at(j));
    }
    values.push_back(d.total());
    const MonotoneFn f = MonotoneFn::Step(knots, values, d.total());
    const StaircaseResult r = staircase_approx(f, d.total() / 10.0, 1000);
    EXPECT_EQ(GapViolations(f, r), 0u);
    for (double level : d.levels()) {
      for (std::size_t i = 1; i < r.breakpoints.size(); ++i) {
        if (level > r.breakpoints[i - 1] && level <= r.breakpoints[i]) {
          EXPECT_LE(std::abs(f(r.breakpoints[i]) - f(level)), r.epsilon);
        }
      }
    }
  }
}

TEST(Staircase, RandomStepsProperties) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const MonotoneFn f = RandomStep(rng);
    for (double eps : {0.01, 0.1, 1.0}) {
      const StaircaseResult r = staircase_approx(f, eps, 400);
      EXPECT_EQ(GapViolations(f, r), 0u);
      EXPECT_LE(max_gap_deviation(f, r), eps);
      for (std::size_t i = 1; i < r.breakpoints.size(); ++i) {
        EXPECT_GT(r.breakpoints[i], r.breakpoints[i - 1]);
        EXPECT_LE(r.breakpoints[i], r.s);
        EXPECT_EQ(r.values[i], f(r.breakpoints[i]));
      }
      // Deterministic prefix under a larger step budget.
      const StaircaseResult longer = staircase_approx(f, eps, 800);
      ASSERT_GE(longer.breakpoints.size(), r.breakpoints.size());
      EXPECT_TRUE(std::equal(r.breakpoints.begin(), r.breakpoints.end(),
                             longer.breakpoints.begin()));
    }
  }
}

TEST(Staircase, RejectsBadInput) {
  const MonotoneFn f = MonotoneFn::Step({1.0}, {0.0, 1.0}, 1.0);
  EXPECT_THROW(staircase_approx(f, 0.0, 10), Error);
  EXPECT_THROW(staircase_approx(f, -1.0, 10), Error);
  const MonotoneFn infinite = MonotoneFn::Step({}, {kInf}, kInf);
  EXPECT_THROW(staircase_approx(infinite, 1.0, 10), Error);
}

TEST(Staircase, ProbeViolationDetected) {
  const MonotoneFn wiggle = MonotoneFn::Analytic(
      [](double t) { return t + 2.0 * std::sin(3.0 * t); }, kInf);
  EXPECT_THROW(staircase_approx(wiggle, 0.05, 500), Error);
}

TEST(InverseStaircase, ConstantField) {
  const GridPtr g = testing::Disk(16);
  const ScalarField c = sample(g, [](const Point&) { return 2.5; });
  const StaircaseResult r = inverse_distribution_staircase(c, 0.5, 0.1, 30);
  EXPECT_EQ(r.s, 2.5);
  EXPECT_EQ(r.kind, StaircaseCase::kHit);
  for (double v : r.values) {
    EXPECT_DOUBLE_EQ(v, std::pow(g->measure(), -0.5));
  }
  const MonotoneFn f = InverseUpperPower(upper_distribution(c), 0.5);
  EXPECT_EQ(max_gap_deviation(f, r), 0.0);
}

TEST(InverseStaircase, ConeBreakpointsApproachTop) {
  const ScalarField cone = testing::Cone(testing::Disk(64));
  const StaircaseResult r = inverse_distribution_staircase(cone, 0.5, 0.5, 200);
  ASSERT_GT(r.breakpoints.size(), 3u);
  EXPECT_DOUBLE_EQ(r.s, cone.max());
  EXPECT_GT(r.breakpoints.back(), 0.9);
  EXPECT_LE(r.breakpoints.back(), r.s);
  const MonotoneFn f = InverseUpperPower(upper_distribution(cone), 0.5);
  EXPECT_EQ(GapViolations(f, r), 0u);
}

TEST(InverseStaircase, Errors) {
  const ScalarField cone = testing::Cone(testing::Disk(16));
  EXPECT_THROW(inverse_distribution_staircase(cone, 0.0, 0.5, 10), Error);
  const ScalarField zero =
      sample(testing::Disk(16), [](const Point&) { return 0.0; });
  EXPECT_THROW(inverse_distribution_staircase(zero, 0.5, 0.5, 10), Error);
}

}  // namespace
}  // namespace fdlab
