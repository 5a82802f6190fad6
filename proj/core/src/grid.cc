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

#include "fdlab/grid.h"

#include <cmath>
#include <sstream>

#include "fdlab/error.h"

namespace fdlab {

BoxDomain UnitBox(int dim) {
  return BoxDomain{std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
}

BallDomain UnitBall(int dim) {
  return BallDomain{std::vector<double>(dim, 0.0), 1.0};
}

bool InDomain(const Domain& domain, const Point& x, int dim) {
  if (const auto* box = std::get_if<BoxDomain>(&domain)) {
    for (int a = 0; a < dim; ++a) {
      if (x[a] < box->lo[a] || x[a] > box->hi[a]) return false;
    }
    return true;
  }
  const auto& ball = std::get<BallDomain>(domain);
  double r2 = 0.0;
  for (int a = 0; a < dim; ++a) {
    const double d = x[a] - ball.center[a];
    r2 += d * d;
  }
  return r2 < ball.radius * ball.radius;
}

Grid::Grid(int dim, std::vector<int> shape, std::vector<double> origin,
           double spacing, Domain domain)
    : dim_(dim),
      shape_(std::move(shape)),
      origin_(std::move(origin)),
      spacing_(spacing),
      domain_(std::move(domain)) {
  if (dim_ != 2 && dim_ != 3) {
    throw Error("grid dimension must be 2 or 3");
  }
  if (static_cast<int>(shape_.size()) != dim_ ||
      static_cast<int>(origin_.size()) != dim_) {
    throw Error("grid shape/origin length does not match dimension");
  }
  for (int s : shape_) {
    if (s < 2) throw Error("grid needs at least 2 cells per axis");
  }
  if (!(spacing_ > 0.0) || !std::isfinite(spacing_)) {
    throw Error("grid spacing must be positive and finite");
  }
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, BoxDomain>) {
          if (static_cast<int>(d.lo.size()) != dim_ ||
              static_cast<int>(d.hi.size()) != dim_) {
            throw Error("box domain dimension mismatch");
          }
        } else {
          if (static_cast<int>(d.center.size()) != dim_) {
            throw Error("ball domain dimension mismatch");
          }
          if (!(d.radius > 0.0)) throw Error("ball radius must be positive");
        }
      },
      domain_);

  cell_volume_ = std::pow(spacing_, dim_);
  std::size_t total = 1;
  for (int a = dim_ - 1; a >= 0; --a) {
    strides_[a] = total;
    total *= static_cast<std::size_t>(shape_[a]);
  }
  mask_.assign(total, 0);
  compact_.assign(total, kUnmasked);
  for (std::size_t c = 0; c < total; ++c) {
    if (InDomain(domain_, center(c), dim_)) {
      mask_[c] = 1;
      compact_[c] = masked_cells_.size();
      masked_cells_.push_back(c);
    }
  }
  if (masked_cells_.empty()) throw Error("grid mask is empty");
}

double Grid::measure() const {
  return static_cast<double>(masked_count()) * cell_volume_;
}

std::array<int, kMaxDim> Grid::unflatten(std::size_t cell) const {
  std::array<int, kMaxDim> ijk{};
  for (int a = 0; a < dim_; ++a) {
    ijk[a] = static_cast<int>(cell / strides_[a]);
    cell %= strides_[a];
  }
  return ijk;
}

std::size_t Grid::flatten(const std::array<int, kMaxDim>& ijk) const {
  std::size_t c = 0;
  for (int a = 0; a < dim_; ++a) c += strides_[a] * ijk[a];
  return c;
}

Point Grid::center(std::size_t cell) const {
  const auto ijk = unflatten(cell);
  Point x{};
  for (int a = 0; a < dim_; ++a) {
    x[a] = origin_[a] + (ijk[a] + 0.5) * spacing_;
  }
  return x;
}

std::size_t Grid::neighbor(std::size_t k, int axis, int dir) const {
  const std::size_t cell = masked_cells_[k];
  const int i = static_cast<int>((cell / strides_[axis]) % shape_[axis]);
  const int j = i + dir;
  if (j < 0 || j >= shape_[axis]) return kUnmasked;
  const std::size_t other =
      dir > 0 ? cell + strides_[axis] : cell - strides_[axis];
  return compact_[other];
}

bool Grid::boundary_adjacent(std::size_t k) const {
  for (int a = 0; a < dim_; ++a) {
    if (neighbor(k, a, -1) == kUnmasked || neighbor(k, a, +1) == kUnmasked) {
      return true;
    }
  }
  return false;
}

bool Grid::operator==(const Grid& other) const {
  return dim_ == other.dim_ && shape_ == other.shape_ &&
         origin_ == other.origin_ && spacing_ == other.spacing_ &&
         mask_ == other.mask_;
}

GridPtr build_grid(const Domain& domain, std::span<const int> resolution) {
  const int dim = std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, BoxDomain>) {
          return static_cast<int>(d.lo.size());
        } else {
          return static_cast<int>(d.center.size());
        }
      },
      domain);
  if (dim != 2 && dim != 3) throw Error("domain dimension must be 2 or 3");
  std::vector<int> shape(resolution.begin(), resolution.end());
  if (shape.size() == 1) shape.assign(dim, shape.front());
  if (static_cast<int>(shape.size()) != dim) {
    throw Error("resolution length does not match domain dimension");
  }
  for (int s : shape) {
    if (s < 2) {
      std::ostringstream msg;
      msg << "resolution " << s << " is degenerate; need at least 2 cells";
      throw Error(msg.str());
    }
  }

  std::vector<double> origin(dim);
  double spacing = 0.0;
  if (const auto* box = std::get_if<BoxDomain>(&domain)) {
    for (int a = 0; a < dim; ++a) {
      const double side = box->hi[a] - box->lo[a];
      if (!(side > 0.0)) throw Error("box domain is degenerate");
      const double h = side / shape[a];
      if (a == 0) {
        spacing = h;
      } else if (std::abs(h - spacing) > 1e-9 * spacing) {
        throw Error("box sides do not admit a uniform spacing");
      }
      origin[a] = box->lo[a];
    }
  } else {
    const auto& ball = std::get<BallDomain>(domain);
    if (!(ball.radius > 0.0)) throw Error("ball domain is degenerate");
    for (int a = 1; a < dim; ++a) {
      if (shape[a] != shape[0]) {
        throw Error("ball domains need equal resolution on every axis");
      }
    }
    spacing = 2.0 * ball.radius / shape[0];
    for (int a = 0; a < dim; ++a) origin[a] = ball.center[a] - ball.radius;
  }
  return std::make_shared<const Grid>(dim, std::move(shape), std::move(origin),
                                      spacing, domain);
}

GridPtr build_grid(const Domain& domain, int resolution) {
  const int r[1] = {resolution};
  return build_grid(domain, std::span<const int>(r, 1));
}

}  // namespace fdlab
