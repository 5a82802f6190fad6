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

#ifndef FDLAB_GRID_H_
#define FDLAB_GRID_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <variant>
#include <vector>

namespace fdlab {

inline constexpr int kMaxDim = 3;

// A point of R^2 or R^3. Unused trailing coordinates are zero.
using Point = std::array<double, kMaxDim>;

// Axis-aligned box [lo, hi].
struct BoxDomain {
  std::vector<double> lo;
  std::vector<double> hi;
};

// Open ball B(center, radius).
struct BallDomain {
  std::vector<double> center;
  double radius = 0.0;
};

using Domain = std::variant<BoxDomain, BallDomain>;

BoxDomain UnitBox(int dim);
BallDomain UnitBall(int dim);

// Cell-centered uniform lattice over a box with a per-cell domain mask.
//
// Cells are stored row-major over `shape` (last axis fastest). Only masked
// cells carry field values; they are numbered 0..masked_count()-1 in
// row-major order.
class Grid {
 public:
  static constexpr std::size_t kUnmasked = static_cast<std::size_t>(-1);

  // `origin` is the lower corner of the lattice box. The mask marks cells
  // whose center lies in `domain`.
  Grid(int dim, std::vector<int> shape, std::vector<double> origin,
       double spacing, Domain domain);

  int dim() const { return dim_; }
  const std::vector<int>& shape() const { return shape_; }
  const std::vector<double>& origin() const { return origin_; }
  double spacing() const { return spacing_; }
  const Domain& domain() const { return domain_; }

  std::size_t cell_count() const { return mask_.size(); }
  std::size_t masked_count() const { return masked_cells_.size(); }
  double cell_volume() const { return cell_volume_; }
  // m_n(Omega) on the lattice: masked count times h^dim.
  double measure() const;

  bool masked(std::size_t cell) const { return mask_[cell] != 0; }
  // Lattice cell of the k-th masked cell.
  std::size_t cell_of(std::size_t k) const { return masked_cells_[k]; }
  // Compact index of a lattice cell, or kUnmasked.
  std::size_t index_of(std::size_t cell) const { return compact_[cell]; }

  std::array<int, kMaxDim> unflatten(std::size_t cell) const;
  std::size_t flatten(const std::array<int, kMaxDim>& ijk) const;
  // Row-major stride of `axis`.
  std::size_t stride(int axis) const { return strides_[axis]; }

  Point center(std::size_t cell) const;
  Point masked_center(std::size_t k) const { return center(cell_of(k)); }

  // Compact index of the neighbour of masked cell k along `axis` in direction
  // `dir` (+1/-1), or kUnmasked when that neighbour is outside the lattice or
  // the mask.
  std::size_t neighbor(std::size_t k, int axis, int dir) const;

  // True when some axis neighbour of masked cell k is unmasked.
  bool boundary_adjacent(std::size_t k) const;

  bool operator==(const Grid& other) const;

 private:
  int dim_;
  std::vector<int> shape_;
  std::vector<double> origin_;
  double spacing_;
  Domain domain_;
  double cell_volume_;
  std::array<std::size_t, kMaxDim> strides_{};
  std::vector<std::uint8_t> mask_;
  std::vector<std::size_t> masked_cells_;
  std::vector<std::size_t> compact_;
};

using GridPtr = std::shared_ptr<const Grid>;

bool InDomain(const Domain& domain, const Point& x, int dim);

// Builds the cell-centered lattice covering `domain` with `resolution` cells
// per axis. Boxes must admit a uniform spacing (side_i / resolution_i equal
// across axes); balls use their bounding box.
GridPtr build_grid(const Domain& domain, std::span<const int> resolution);
GridPtr build_grid(const Domain& domain, int resolution);

}  // namespace fdlab

#endif  // FDLAB_GRID_H_
