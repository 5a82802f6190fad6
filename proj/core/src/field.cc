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

#include "fdlab/field.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fdlab/error.h"
#include "fdlab/summation.h"

namespace fdlab {

namespace {

std::string DescribeCell(const Grid& grid, std::size_t k) {
  const Point x = grid.masked_center(k);
  std::ostringstream out;
  out << "cell " << k << " at (" << x[0] << ", " << x[1];
  if (grid.dim() == 3) out << ", " << x[2];
  out << ")";
  return out.str();
}

}  // namespace

ScalarField::ScalarField(GridPtr grid, std::vector<double> values,
                         bool nonnegative)
    : grid_(std::move(grid)),
      values_(std::move(values)),
      nonnegative_(nonnegative) {
  if (!grid_) throw Error("scalar field needs a grid");
  if (values_.size() != grid_->masked_count()) {
    throw Error("scalar field value count does not match masked cell count");
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw Error("non-finite value at " + DescribeCell(*grid_, k));
    }
    if (nonnegative_ && values_[k] < 0.0) {
      throw Error("negative value in nonnegative field at " +
                  DescribeCell(*grid_, k));
    }
  }
}

double ScalarField::max() const {
  return *std::max_element(values_.begin(), values_.end());
}

double ScalarField::min() const {
  return *std::min_element(values_.begin(), values_.end());
}

VectorMap::VectorMap(std::vector<ScalarField> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw Error("vector map needs components");
  const Grid& g = components_.front().grid();
  if (static_cast<int>(components_.size()) != g.dim()) {
    throw Error("vector map needs one component per dimension");
  }
  for (const auto& c : components_) {
    if (c.grid_ptr() != components_.front().grid_ptr() && !(c.grid() == g)) {
      throw Error("vector map components live on different grids");
    }
  }
}

VectorMap VectorMap::with_component(int i, ScalarField field) const {
  if (i < 0 || i >= dim()) throw Error("component index out of range");
  std::vector<ScalarField> comps = components_;
  comps[i] = std::move(field);
  return VectorMap(std::move(comps));
}

MatrixField::MatrixField(GridPtr grid, std::vector<double> entries)
    : grid_(std::move(grid)), entries_(std::move(entries)) {
  const std::size_t n = static_cast<std::size_t>(grid_->dim());
  if (entries_.size() != grid_->masked_count() * n * n) {
    throw Error("matrix field entry count mismatch");
  }
  for (double e : entries_) {
    if (!std::isfinite(e)) throw Error("matrix field entry is not finite");
  }
}

std::span<const double> MatrixField::cell(std::size_t k) const {
  const std::size_t n2 = static_cast<std::size_t>(dim() * dim());
  return std::span<const double>(entries_).subspan(k * n2, n2);
}

ScalarField sample(const GridPtr& grid, const ScalarEvaluator& f) {
  std::vector<double> values(grid->masked_count());
  for (std::size_t k = 0; k < values.size(); ++k) {
    values[k] = f(grid->masked_center(k));
    if (!std::isfinite(values[k])) {
      throw Error("evaluator returned a non-finite value at " +
                  DescribeCell(*grid, k));
    }
  }
  return ScalarField(grid, std::move(values));
}

VectorMap sample(const GridPtr& grid, const VectorEvaluator& f) {
  const int n = grid->dim();
  std::vector<std::vector<double>> comps(
      n, std::vector<double>(grid->masked_count()));
  for (std::size_t k = 0; k < grid->masked_count(); ++k) {
    const Point y = f(grid->masked_center(k));
    for (int i = 0; i < n; ++i) {
      if (!std::isfinite(y[i])) {
        throw Error("evaluator returned a non-finite value at " +
                    DescribeCell(*grid, k));
      }
      comps[i][k] = y[i];
    }
  }
  std::vector<ScalarField> fields;
  fields.reserve(n);
  for (auto& c : comps) fields.emplace_back(grid, std::move(c));
  return VectorMap(std::move(fields));
}

VectorMap gradient(const ScalarField& field) {
  const Grid& g = field.grid();
  const int n = g.dim();
  const double h = g.spacing();
  const auto v = field.values();
  std::vector<std::vector<double>> d(n, std::vector<double>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) {
    for (int a = 0; a < n; ++a) {
      const std::size_t lo = g.neighbor(k, a, -1);
      const std::size_t hi = g.neighbor(k, a, +1);
      if (lo != Grid::kUnmasked && hi != Grid::kUnmasked) {
        d[a][k] = (v[hi] - v[lo]) / (2.0 * h);
      } else if (hi != Grid::kUnmasked) {
        d[a][k] = (v[hi] - v[k]) / h;
      } else if (lo != Grid::kUnmasked) {
        d[a][k] = (v[k] - v[lo]) / h;
      } else {
        throw Error("isolated masked " + DescribeCell(g, k) + " along axis " +
                    std::to_string(a));
      }
    }
  }
  std::vector<ScalarField> comps;
  comps.reserve(n);
  for (auto& c : d) comps.emplace_back(field.grid_ptr(), std::move(c));
  return VectorMap(std::move(comps));
}

MatrixField differential(const VectorMap& map) {
  const int n = map.dim();
  const std::size_t count = map.grid().masked_count();
  std::vector<double> entries(count * n * n);
  for (int i = 0; i < n; ++i) {
    const VectorMap row = gradient(map.component(i));
    for (int j = 0; j < n; ++j) {
      const auto col = row.component(j).values();
      for (std::size_t k = 0; k < count; ++k) {
        entries[(k * n + i) * n + j] = col[k];
      }
    }
  }
  return MatrixField(map.grid_ptr(), std::move(entries));
}

double Determinant(std::span<const double> m, int dim) {
  if (dim == 2) return m[0] * m[3] - m[1] * m[2];
  return m[0] * (m[4] * m[8] - m[5] * m[7]) -
         m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

double OperatorNorm(std::span<const double> m, int dim) {
  if (dim == 2) {
    const double a = m[0], b = m[1], c = m[2], d = m[3];
    return 0.5 * (std::hypot(a + d, c - b) + std::hypot(a - d, b + c));
  }
  // Largest eigenvalue of S = M^T M from the trigonometric solution of its
  // characteristic cubic.
  double s[3][3];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      s[i][j] = m[i] * m[j] + m[3 + i] * m[3 + j] + m[6 + i] * m[6 + j];
    }
  }
  const double p1 = s[0][1] * s[0][1] + s[0][2] * s[0][2] + s[1][2] * s[1][2];
  double lambda;
  if (p1 == 0.0) {
    lambda = std::max({s[0][0], s[1][1], s[2][2]});
  } else {
    const double q = (s[0][0] + s[1][1] + s[2][2]) / 3.0;
    const double p2 = (s[0][0] - q) * (s[0][0] - q) +
                      (s[1][1] - q) * (s[1][1] - q) +
                      (s[2][2] - q) * (s[2][2] - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    double b[9];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        b[3 * i + j] = (s[i][j] - (i == j ? q : 0.0)) / p;
      }
    }
    const double r = std::clamp(Determinant(b, 3) / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    lambda = q + 2.0 * p * std::cos(phi);
  }
  return std::sqrt(std::max(lambda, 0.0));
}

ScalarField op_norm(const MatrixField& d) {
  std::vector<double> out(d.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = OperatorNorm(d.cell(k), d.dim());
  }
  return ScalarField(d.grid_ptr(), std::move(out), true);
}

ScalarField jacobian(const MatrixField& d) {
  std::vector<double> out(d.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = Determinant(d.cell(k), d.dim());
  }
  return ScalarField(d.grid_ptr(), std::move(out));
}

double integrate(const Grid& grid, std::span<const double> values) {
  CompensatedSum sum;
  for (double v : values) sum += v;
  return grid.cell_volume() * sum.value();
}

double integrate(const ScalarField& field) {
  return integrate(field.grid(), field.values());
}

ScalarField truncate(const ScalarField& field, double level,
                     TruncateMode mode) {
  std::vector<double> out(field.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double d =
        mode == TruncateMode::kAbove ? field[k] - level : level - field[k];
    out[k] = std::max(d, 0.0);
  }
  return ScalarField(field.grid_ptr(), std::move(out), true);
}

ScalarField magnitude(const VectorMap& map) {
  std::vector<double> out(map.grid().masked_count(), 0.0);
  for (const auto& c : map.components()) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += c[k] * c[k];
  }
  for (double& v : out) v = std::sqrt(v);
  return ScalarField(map.grid_ptr(), std::move(out), true);
}

double interpolate(const ScalarField& field, const Point& x) {
  const Grid& g = field.grid();
  const int n = g.dim();
  std::array<int, kMaxDim> base{};
  std::array<double, kMaxDim> frac{};
  for (int a = 0; a < n; ++a) {
    const double u = (x[a] - g.origin()[a]) / g.spacing() - 0.5;
    int i = static_cast<int>(std::floor(u));
    double t = u - i;
    if (i == g.shape()[a] - 1 && t == 0.0) {
      i -= 1;
      t = 1.0;
    }
    if (i < 0 || i + 1 >= g.shape()[a]) {
      throw Error("interpolation point outside the grid");
    }
    base[a] = i;
    frac[a] = t;
  }
  double value = 0.0;
  for (int corner = 0; corner < (1 << n); ++corner) {
    std::array<int, kMaxDim> ijk = base;
    double w = 1.0;
    for (int a = 0; a < n; ++a) {
      const int bit = (corner >> a) & 1;
      ijk[a] += bit;
      w *= bit ? frac[a] : 1.0 - frac[a];
    }
    const std::size_t k = g.index_of(g.flatten(ijk));
    if (k == Grid::kUnmasked) {
      throw Error("interpolation stencil leaves the masked domain");
    }
    value += w * field[k];
  }
  return value;
}

std::vector<Point> sphere_points(const Ball& ball, int dim, int samples) {
  std::vector<Point> pts(samples);
  if (dim == 2) {
    for (int j = 0; j < samples; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / samples;
      pts[j] = ball.center;
      pts[j][0] += ball.radius * std::cos(theta);
      pts[j][1] += ball.radius * std::sin(theta);
    }
    return pts;
  }
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int j = 0; j < samples; ++j) {
    const double z = 1.0 - (2.0 * j + 1.0) / samples;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * j;
    pts[j] = ball.center;
    pts[j][0] += ball.radius * rho * std::cos(phi);
    pts[j][1] += ball.radius * rho * std::sin(phi);
    pts[j][2] += ball.radius * z;
  }
  return pts;
}

std::vector<double> sphere_trace(const ScalarField& field, const Ball& ball,
                                 int samples) {
  if (samples < 8) throw Error("sphere trace needs at least 8 samples");
  if (!(ball.radius > 0.0)) throw Error("ball radius must be positive");
  const auto pts = sphere_points(ball, field.grid().dim(), samples);
  std::vector<double> out;
  out.reserve(pts.size());
  try {
    for (const auto& p : pts) out.push_back(interpolate(field, p));
  } catch (const Error&) {
    throw Error("sphere touches or leaves the masked domain");
  }
  return out;
}

bool vanishes_on_boundary(const ScalarField& field, double rel_tol) {
  double scale = 0.0;
  for (double v : field.values()) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return true;
  const Grid& g = field.grid();
  for (std::size_t k = 0; k < field.size(); ++k) {
    if (g.boundary_adjacent(k) && std::abs(field[k]) >= rel_tol * scale) {
      return false;
    }
  }
  return true;
}

}  // namespace fdlab
