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

#ifndef FDLAB_FIELD_H_
#define FDLAB_FIELD_H_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fdlab/grid.h"

namespace fdlab {

// Values of a real function at the masked cell centers of a grid.
class ScalarField {
 public:
  ScalarField(GridPtr grid, std::vector<double> values,
              bool nonnegative = false);

  const GridPtr& grid_ptr() const { return grid_; }
  const Grid& grid() const { return *grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  std::size_t size() const { return values_.size(); }
  bool nonnegative() const { return nonnegative_; }

  double max() const;
  double min() const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
  bool nonnegative_;
};

// n scalar components sharing one grid.
class VectorMap {
 public:
  explicit VectorMap(std::vector<ScalarField> components);

  const GridPtr& grid_ptr() const { return components_.front().grid_ptr(); }
  const Grid& grid() const { return components_.front().grid(); }
  int dim() const { return static_cast<int>(components_.size()); }
  const ScalarField& component(int i) const { return components_[i]; }
  const std::vector<ScalarField>& components() const { return components_; }

  // Copy with component i replaced.
  VectorMap with_component(int i, ScalarField field) const;

 private:
  std::vector<ScalarField> components_;
};

// One dim x dim matrix per masked cell, row-major within the cell.
class MatrixField {
 public:
  MatrixField(GridPtr grid, std::vector<double> entries);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  int dim() const { return grid_->dim(); }
  std::size_t size() const { return grid_->masked_count(); }
  std::span<const double> cell(std::size_t k) const;
  double at(std::size_t k, int row, int col) const {
    return entries_[(k * dim() + row) * dim() + col];
  }

 private:
  GridPtr grid_;
  std::vector<double> entries_;
};

struct Ball {
  Point center{};
  double radius = 0.0;
};

using ScalarEvaluator = std::function<double(const Point&)>;
using VectorEvaluator = std::function<Point(const Point&)>;

ScalarField sample(const GridPtr& grid, const ScalarEvaluator& f);
VectorMap sample(const GridPtr& grid, const VectorEvaluator& f);

// Second-order central differences where both axis neighbours are masked,
// first-order one-sided differences at the mask boundary.
VectorMap gradient(const ScalarField& field);
// Row i holds the gradient of component i.
MatrixField differential(const VectorMap& map);

// Largest singular value of a 2x2 or 3x3 matrix (row-major).
double OperatorNorm(std::span<const double> m, int dim);
double Determinant(std::span<const double> m, int dim);

ScalarField op_norm(const MatrixField& d);
ScalarField jacobian(const MatrixField& d);

// Midpoint rule: h^dim times the compensated sum over masked cells.
double integrate(const ScalarField& field);
double integrate(const Grid& grid, std::span<const double> values);

enum class TruncateMode { kAbove, kBelow };

// kAbove: max(phi - level, 0); kBelow: max(level - phi, 0).
ScalarField truncate(const ScalarField& field, double level,
                     TruncateMode mode);

// Cellwise |v|.
ScalarField magnitude(const VectorMap& map);

// Multilinear interpolation from the 2^dim surrounding cell centers; throws
// when any of them is unmasked.
double interpolate(const ScalarField& field, const Point& x);

// Quadrature points on the sphere bounding `ball`: uniform angles in 2D,
// a Fibonacci lattice in 3D.
std::vector<Point> sphere_points(const Ball& ball, int dim, int samples);

// Field values interpolated at sphere_points(ball). Throws when the sphere
// touches or leaves the masked domain.
std::vector<double> sphere_trace(const ScalarField& field, const Ball& ball,
                                 int samples);

// True when every boundary-adjacent masked cell has |value| below
// rel_tol * max|value|. Surrogate for vanishing boundary values.
bool vanishes_on_boundary(const ScalarField& field, double rel_tol = 1e-9);

}  // namespace fdlab

#endif  // FDLAB_FIELD_H_
