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

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "fdlab/error.h"
#include "fdlab/field.h"
#include "fdlab/grid.h"
#include "support.h"

namespace fdlab {
namespace {

using testing::Cone;
using testing::Disk;
using testing::Square;

TEST(Grid, UnitSquareFourByFour) {
  const GridPtr g = Square(4);
  EXPECT_EQ(g->masked_count(), 16u);
  EXPECT_DOUBLE_EQ(g->cell_volume(), 1.0 / 16.0);
  EXPECT_DOUBLE_EQ(g->measure(), 1.0);
}

TEST(Grid, UnitDiskMeasureCloseToPi) {
  const GridPtr g = Disk(64);
  EXPECT_NEAR(g->measure(), std::numbers::pi, 0.02 * std::numbers::pi);
}

TEST(Grid, DegenerateResolutionThrows) {
  EXPECT_THROW(Square(1), Error);
  EXPECT_THROW(Square(0), Error);
  EXPECT_THROW(build_grid(UnitBox(2), std::vector<int>{4, 1}), Error);
}

TEST(Grid, EmptyMaskThrows) {
  // A ball smaller than half a cell around a cell corner contains no center.
  EXPECT_THROW(Grid(2, {4, 4}, {0.0, 0.0}, 0.25,
                    BallDomain{{0.5, 0.5}, 0.01}),
               Error);
}

TEST(Grid, BallMaskIsOpen) {
  // Centers (-0.5,-0.5) and (0.5,0.5) lie exactly on the sphere.
  const Grid g(2, {2, 2}, {-1.0, -1.0}, 1.0, BallDomain{{0.5, -0.5}, 1.0});
  EXPECT_EQ(g.masked_count(), 1u);
}

TEST(Grid, IndexingRoundTrips) {
  const GridPtr g = build_grid(UnitBall(3), 12);
  for (std::size_t k = 0; k < g->masked_count(); ++k) {
    const std::size_t cell = g->cell_of(k);
    EXPECT_EQ(g->index_of(cell), k);
    EXPECT_EQ(g->flatten(g->unflatten(cell)), cell);
    EXPECT_TRUE(InDomain(g->domain(), g->center(cell), 3));
  }
}

TEST(Grid, RowMajorLastAxisFastest) {
  const GridPtr g = Square(4);
  EXPECT_EQ(g->stride(1), 1u);
  EXPECT_EQ(g->stride(0), 4u);
  const Point c = g->center(1);
  EXPECT_DOUBLE_EQ(c[0], 0.125);
  EXPECT_DOUBLE_EQ(c[1], 0.375);
}

TEST(Sample, ZeroAndIdentity) {
  const GridPtr g = Disk(16);
  const ScalarField z = sample(g, [](const Point&) { return 0.0; });
  for (double v : z.values()) EXPECT_EQ(v, 0.0);
  const VectorMap id = sample(g, [](const Point& x) { return x; });
  ASSERT_EQ(id.dim(), 2);
  for (std::size_t k = 0; k < g->masked_count(); ++k) {
    EXPECT_EQ(id.component(0)[k], g->masked_center(k)[0]);
    EXPECT_EQ(id.component(1)[k], g->masked_center(k)[1]);
  }
}

TEST(Sample, ConeMaxAtCenterCell) {
  const GridPtr g = Disk(64);
  const double h = g->spacing();
  EXPECT_NEAR(Cone(g).max(), 1.0 - h / std::sqrt(2.0), 1e-14);
}

TEST(Sample, NonFiniteThrows) {
  const GridPtr g = Square(4);
  EXPECT_THROW(sample(g, [](const Point&) { return std::nan(""); }), Error);
}

TEST(Field, NonnegativeFlagNamesCell) {
  const GridPtr g = Square(2);
  try {
    ScalarField(g, {0.0, 1.0, -1.0, 0.0}, true);
    FAIL() << "expected an exception";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("cell 2"), std::string::npos)
        << e.what();
  }
}

TEST(Gradient, AffineExact) {
  const GridPtr g = Disk(32);
  const ScalarField f =
      sample(g, [](const Point& x) { return 3.0 * x[0] - 2.0 * x[1] + 1.0; });
  const VectorMap grad = gradient(f);
  for (std::size_t k = 0; k < f.size(); ++k) {
    EXPECT_NEAR(grad.component(0)[k], 3.0, 1e-12);
    EXPECT_NEAR(grad.component(1)[k], -2.0, 1e-12);
  }
}

TEST(Gradient, ConstantIsZero) {
  const GridPtr g = Square(8);
  const VectorMap grad = gradient(sample(g, [](const Point&) { return 4.0; }));
  for (double v : grad.component(0).values()) EXPECT_EQ(v, 0.0);
}

TEST(Gradient, ParabolaExactAtSymmetricStencil) {
  // 1/h = 8 puts cell centers at odd multiples of 1/16; cells 7 and 8
  // straddle 0.5, so use a lattice offset by half a cell instead.
  const auto g = std::make_shared<const Grid>(
      2, std::vector<int>{9, 9}, std::vector<double>{-0.0625, -0.0625}, 0.125,
      BoxDomain{{-0.0625, -0.0625}, {1.0625, 1.0625}});
  const ScalarField f = sample(g, [](const Point& x) { return x[0] * x[0]; });
  const VectorMap grad = gradient(f);
  const std::size_t k = g->index_of(g->flatten({4, 4, 0}));
  EXPECT_DOUBLE_EQ(g->masked_center(k)[0], 0.5);
  EXPECT_DOUBLE_EQ(grad.component(0)[k], 1.0);
}

TEST(Gradient, IsolatedCellThrows) {
  // A ball that catches exactly one cell center.
  const auto g = std::make_shared<const Grid>(
      2, std::vector<int>{4, 4}, std::vector<double>{0.0, 0.0}, 0.25,
      BallDomain{{0.375, 0.375}, 0.1});
  ASSERT_EQ(g->masked_count(), 1u);
  EXPECT_THROW(gradient(ScalarField(g, {1.0})), Error);
}

TEST(Differential, LinearMapExact) {
  const GridPtr g = build_grid(UnitBall(3), 10);
  const double a[3][3] = {{1, 2, 0}, {0, -1, 3}, {0.5, 0, 2}};
  const VectorMap m = sample(g, [&](const Point& x) {
    Point y{};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) y[r] += a[r][c] * x[c];
    }
    return y;
  });
  const MatrixField d = differential(m);
  for (std::size_t k = 0; k < d.size(); ++k) {
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) EXPECT_NEAR(d.at(k, r, c), a[r][c], 1e-12);
    }
  }
}

TEST(Differential, WindingSingularValues) {
  const GridPtr g = Disk(128);
  const VectorMap m = sample(g, [](const Point& x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    const double r = std::sqrt(r2);
    if (r == 0.0) return Point{};
    return Point{(x[0] * x[0] - x[1] * x[1]) / r, 2 * x[0] * x[1] / r, 0.0};
  });
  const MatrixField d = differential(m);
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double r = testing::Radius(g->masked_center(k));
    if (r < 0.2 || r > 0.8) continue;
    Eigen::Matrix2d M;
    M << d.at(k, 0, 0), d.at(k, 0, 1), d.at(k, 1, 0), d.at(k, 1, 1);
    const Eigen::Vector2d s = Eigen::JacobiSVD<Eigen::Matrix2d>(M).singularValues();
    EXPECT_NEAR(s(0), 2.0, 0.02);
    EXPECT_NEAR(s(1), 1.0, 0.02);
  }
}

TEST(OperatorNorm, ClosedForms) {
  const double diag[] = {2, 0, 0, 3};
  EXPECT_NEAR(OperatorNorm(diag, 2), 3.0, 1e-14);
  EXPECT_NEAR(Determinant(diag, 2), 6.0, 1e-14);
  const double id3[] = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  EXPECT_NEAR(OperatorNorm(id3, 3), 1.0, 1e-14);
  EXPECT_NEAR(Determinant(id3, 3), 1.0, 1e-14);
  const double t = 0.7;
  const double rot[] = {std::cos(t), -std::sin(t), std::sin(t), std::cos(t)};
  EXPECT_NEAR(OperatorNorm(rot, 2), 1.0, 1e-14);
  EXPECT_NEAR(Determinant(rot, 2), 1.0, 1e-14);
}

// Singular values from Eigen serve as the oracle.
TEST(OperatorNorm, MatchesSvdOnRandomMatrices) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 500; ++trial) {
    const int dim = trial % 2 ? 3 : 2;
    Eigen::MatrixXd M(dim, dim);
    std::vector<double> flat(dim * dim);
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) {
        M(r, c) = flat[r * dim + c] = n01(rng) * (trial % 7 == 0 ? 1e-3 : 1.0);
      }
    }
    const double sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues()(0);
    EXPECT_NEAR(OperatorNorm(flat, dim), sigma, 1e-10 * (1.0 + sigma));
    EXPECT_NEAR(Determinant(flat, dim), M.determinant(),
                1e-12 * (1.0 + std::abs(M.determinant())));
    // |D| >= |det D|^(1/n)
    EXPECT_GE(OperatorNorm(flat, dim) * (1 + 1e-12),
              std::pow(std::abs(M.determinant()), 1.0 / dim));
  }
}

TEST(OperatorNorm, FieldVersions) {
  const GridPtr g = Square(6);
  const VectorMap m = sample(g, [](const Point& x) {
    return Point{2 * x[0], 3 * x[1], 0};
  });
  const MatrixField d = differential(m);
  const ScalarField norm = op_norm(d);
  const ScalarField det = jacobian(d);
  for (double v : norm.values()) EXPECT_NEAR(v, 3.0, 1e-12);
  for (double v : det.values()) EXPECT_NEAR(v, 6.0, 1e-12);
}

TEST(Integrate, ExactCases) {
  const GridPtr g = Square(16);
  EXPECT_DOUBLE_EQ(integrate(sample(g, [](const Point&) { return 1.0; })), 1.0);
  EXPECT_NEAR(integrate(sample(g, [](const Point& x) { return x[0]; })), 0.5,
              1e-12);
}

TEST(Integrate, ConeVolume) {
  EXPECT_NEAR(integrate(Cone(Disk(256))), std::numbers::pi / 3.0,
              0.01 * std::numbers::pi / 3.0);
}

TEST(Integrate, LinearAndMonotone) {
  std::mt19937_64 rng(5);
  const GridPtr g = Disk(24);
  for (int trial = 0; trial < 50; ++trial) {
    const ScalarField a = testing::RandomField(g, rng);
    const ScalarField b = testing::RandomField(g, rng);
    std::vector<double> sum(a.size());
    std::vector<double> hi(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      sum[k] = 2.0 * a[k] - b[k];
      hi[k] = std::max(a[k], b[k]);
    }
    EXPECT_NEAR(integrate(*g, sum),
                2.0 * integrate(a) - integrate(b),
                1e-12 * (1.0 + integrate(a) + integrate(b)));
    EXPECT_LE(integrate(a), integrate(*g, hi));
  }
}

TEST(Truncate, ConeAboveHalf) {
  const GridPtr g = Disk(128);
  const ScalarField t = truncate(Cone(g), 0.5, TruncateMode::kAbove);
  EXPECT_NEAR(t.max(), 0.5, g->spacing());
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double r = testing::Radius(g->masked_center(k));
    if (r >= 0.5) {
      EXPECT_EQ(t[k], 0.0);
    }
    if (r < 0.5 - 1e-12) {
      EXPECT_GT(t[k], 0.0);
    }
  }
}

TEST(Truncate, ExtremeLevelsGiveZero) {
  const ScalarField c = Cone(Disk(32));
  EXPECT_EQ(truncate(c, c.max(), TruncateMode::kAbove).max(), 0.0);
  EXPECT_EQ(truncate(c, c.min(), TruncateMode::kBelow).max(), 0.0);
}

TEST(Truncate, AboveDecomposition) {
  std::mt19937_64 rng(3);
  const GridPtr g = Disk(20);
  for (int trial = 0; trial < 30; ++trial) {
    const ScalarField f = testing::RandomField(g, rng);
    const double level = 0.5 * f.max();
    const ScalarField t = truncate(f, level, TruncateMode::kAbove);
    for (std::size_t k = 0; k < f.size(); ++k) {
      EXPECT_EQ(t[k] + std::min(f[k], level), f[k]);
    }
  }
}

TEST(Interpolate, ExactOnAffine) {
  const GridPtr g = Disk(32);
  const ScalarField f =
      sample(g, [](const Point& x) { return 1.0 + x[0] - 0.5 * x[1]; });
  EXPECT_NEAR(interpolate(f, {0.123, -0.321, 0}), 1.0 + 0.123 + 0.5 * 0.321,
              1e-12);
}

TEST(SphereTrace, AffineCircle) {
  const GridPtr g = Disk(64);
  const ScalarField f = sample(g, [](const Point& x) { return x[0]; });
  const int samples = 64;
  const std::vector<double> trace = sphere_trace(f, Ball{{}, 0.5}, samples);
  ASSERT_EQ(trace.size(), static_cast<std::size_t>(samples));
  const std::vector<Point> pts = sphere_points(Ball{{}, 0.5}, 2, samples);
  for (int j = 0; j < samples; ++j) {
    EXPECT_NEAR(trace[j], pts[j][0], 1e-12);
    EXPECT_NEAR(testing::Radius(pts[j]), 0.5, 1e-14);
  }
  EXPECT_NEAR(*std::max_element(trace.begin(), trace.end()), 0.5, 1e-12);
}

TEST(SphereTrace, ConeCircleAndBounds) {
  const GridPtr g = Disk(128);
  const ScalarField c = Cone(g);
  for (double r : {0.2, 0.5, 0.8}) {
    for (double v : sphere_trace(c, Ball{{}, r}, 128)) {
      EXPECT_NEAR(v, 1.0 - r, 2.0 * g->spacing());
      EXPECT_LE(v, c.max());
      EXPECT_GE(v, c.min());
    }
  }
}

TEST(SphereTrace, ThreeDimensionalSphere) {
  const GridPtr g = build_grid(UnitBall(3), 32);
  const ScalarField f = sample(g, [](const Point& x) { return x[2]; });
  const std::vector<Point> pts = sphere_points(Ball{{}, 0.4}, 3, 200);
  const std::vector<double> trace = sphere_trace(f, Ball{{}, 0.4}, 200);
  for (std::size_t j = 0; j < pts.size(); ++j) {
    EXPECT_NEAR(testing::Radius(pts[j]), 0.4, 1e-14);
    EXPECT_NEAR(trace[j], pts[j][2], 1e-12);
  }
}

TEST(SphereTrace, LeavingDomainThrows) {
  const ScalarField c = Cone(Disk(32));
  EXPECT_THROW(sphere_trace(c, Ball{{}, 1.2}, 32), Error);
  EXPECT_THROW(sphere_trace(c, Ball{{0.9, 0, 0}, 0.3}, 32), Error);
  EXPECT_THROW(sphere_trace(c, Ball{{}, 0.5}, 4), Error);
}

TEST(Support, VanishesOnBoundary) {
  const GridPtr g = Disk(64);
  const ScalarField bump = sample(g, [](const Point& x) {
    const double r = testing::Radius(x);
    return r < 0.5 ? std::exp(1.0 - 1.0 / (1.0 - 4 * r * r)) : 0.0;
  });
  EXPECT_TRUE(vanishes_on_boundary(bump));
  EXPECT_FALSE(vanishes_on_boundary(sample(g, [](const Point& x) { return x[0]; })));
}

}  // namespace
}  // namespace fdlab
