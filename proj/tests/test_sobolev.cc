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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fdlab/error.h"
#include "fdlab/sobolev.h"
#include "support.h"

namespace fdlab {
namespace {

using testing::Cone;
using testing::Disk;
using testing::Radius;

ScalarField Bump(const GridPtr& g) {
  return sample(g, [](const Point& x) {
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    return r2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r2)) : 0.0;
  });
}

TEST(UnitBallVolume, ClosedForms) {
  EXPECT_NEAR(unit_ball_volume(1), 2.0, 1e-14);
  EXPECT_NEAR(unit_ball_volume(2), std::numbers::pi, 1e-14);
  EXPECT_NEAR(unit_ball_volume(3), 4.0 * std::numbers::pi / 3.0, 1e-14);
  EXPECT_THROW(unit_ball_volume(0), Error);
}

TEST(SharpSobolev, ZeroField) {
  const InequalityReport r =
      sharp_sobolev_check(sample(Disk(16), [](const Point&) { return 0.0; }));
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_EQ(r.rhs, 0.0);
  EXPECT_TRUE(r.holds);
}

TEST(SharpSobolev, ConeAnalyticSides) {
  const InequalityReport r = sharp_sobolev_check(Cone(Disk(256)));
  EXPECT_NEAR(r.lhs, std::sqrt(std::numbers::pi / 6.0), 0.01);
  EXPECT_NEAR(r.rhs, std::sqrt(std::numbers::pi) / 2.0, 0.01);
  EXPECT_TRUE(r.holds);
}

TEST(SharpSobolev, SmoothBump) {
  const InequalityReport r = sharp_sobolev_check(Bump(Disk(256)));
  EXPECT_TRUE(r.holds);
  EXPECT_FALSE(r.support_warning);
}

TEST(Superlevel, ZeroField) {
  const InequalityReport r =
      superlevel_check(sample(Disk(16), [](const Point&) { return 0.0; }));
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_EQ(r.rhs, 0.0);
  EXPECT_TRUE(r.holds);
}

TEST(Superlevel, ConeEqualityUnderRefinement) {
  double prev_gap = 1.0;
  for (int n : {64, 128, 256}) {
    const InequalityReport r = superlevel_check(Cone(Disk(n)));
    EXPECT_TRUE(r.holds) << n;
    const double gap = std::abs(r.rhs - 1.0) + std::abs(r.lhs - 1.0);
    EXPECT_LT(gap, prev_gap);
    prev_gap = gap;
  }
  EXPECT_LT(prev_gap, 0.02);
}

// Radial profiles give equality; elliptic level sets have excess perimeter.
TEST(Superlevel, EllipticConeHoldsStrictly) {
  const ScalarField f = sample(Disk(256), [](const Point& x) {
    return std::max(0.0, 1.0 - std::hypot(x[0], x[1] / 0.4));
  });
  const InequalityReport r = superlevel_check(f);
  EXPECT_TRUE(r.holds);
  EXPECT_LT(r.ratio, 0.9);
}

TEST(Superlevel, NegativeValuesRejected) {
  EXPECT_THROW(superlevel_check(sample(Disk(16), [](const Point& x) {
                 return x[0];
               })),
               Error);
}

TEST(Superlevel, ConeFamilyHomogeneity) {
  const GridPtr g = Disk(128);
  const InequalityReport base = superlevel_check(Cone(g));
  for (double c : {0.5, 3.0}) {
    const ScalarField f = sample(g, [c](const Point& x) {
      return c * std::max(0.0, 1.0 - Radius(x));
    });
    const InequalityReport r = superlevel_check(f);
    EXPECT_NEAR(r.lhs, c * base.lhs, 1e-12 * c);
    EXPECT_NEAR(r.rhs, c * base.rhs, 1e-12 * c);
  }
}

TEST(Superlevel, ThreeDimensionalCone) {
  const GridPtr g = build_grid(UnitBall(3), 96);
  const InequalityReport r = superlevel_check(Cone(g));
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.rhs / r.lhs, 1.0, 0.05);
}

// For the cone the band integral is the area between two circles scaled
// by |grad| = 1, divided by (pi (1-b)^2)^(1/2), times 1/(2 sqrt(pi)):
// (pi((1-a)^2 - (1-b)^2)) / (2 pi (1-b)) = 1 for a = 0.25, b = 0.75.
TEST(BandBound, ConeAnalyticValue) {
  const InequalityReport r = band_bound_check(Cone(Disk(256)), 0.25, 0.75);
  EXPECT_DOUBLE_EQ(r.lhs, 0.5);
  EXPECT_NEAR(r.rhs, 1.0, 0.02);
  EXPECT_TRUE(r.holds);
}

TEST(BandBound, Errors) {
  const ScalarField c = Cone(Disk(32));
  EXPECT_THROW(band_bound_check(c, 0.6, 1.2), Error);
  EXPECT_THROW(band_bound_check(c, 0.5, 0.5), Error);
  EXPECT_THROW(band_bound_check(c, -0.1, 0.5), Error);
}

TEST(BandBound, BumpBands) {
  const ScalarField b = Bump(Disk(256));
  for (auto [lo, hi] : {std::pair{0.0, 0.5}, {0.4, 0.95}, {0.1, 0.9}, {0.7, 0.8}}) {
    EXPECT_TRUE(band_bound_check(b, lo, hi).holds) << lo << " " << hi;
  }
}

TEST(BandBound, ExhaustionApproachesSuperlevel) {
  const ScalarField c = Cone(Disk(128));
  const InequalityReport full = superlevel_check(c);
  double prev = 0.0;
  for (double frac : {0.5, 0.8, 0.95}) {
    const InequalityReport r = band_bound_check(c, 0.0, frac * c.max());
    EXPECT_TRUE(r.holds);
    EXPECT_GT(r.lhs, prev);
    prev = r.lhs;
    EXPECT_LE(r.lhs, full.lhs);
  }
}

}  // namespace
}  // namespace fdlab
