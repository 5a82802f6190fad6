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

#ifndef FDLAB_GALLERY_H_
#define FDLAB_GALLERY_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fdlab/distortion.h"
#include "fdlab/field.h"
#include "fdlab/grid.h"

namespace fdlab {

using ExampleParams = std::map<std::string, double>;

enum class ExampleKind { kScalar, kMap };

struct Example {
  std::string name;
  ExampleParams params;  // resolved, defaults filled in
  int dim = 2;
  ExampleKind kind = ExampleKind::kMap;
  ScalarEvaluator scalar;  // set for kScalar
  VectorEvaluator map;     // set for kMap
  std::optional<ScalarEvaluator> analytic_K;
  std::optional<ScalarEvaluator> analytic_Sigma;

  std::string distortion_class;
  std::string expected_modulus;
  std::vector<Point> singular_points;
  std::vector<std::string> flags;
  Domain default_domain;
  // radial_log only: K is clamped to 1 for |x| beyond this radius.
  std::optional<double> clamp_radius;

  bool has_flag(const std::string& flag) const;
};

// Known names: identity, linear, cone, bump, winding, radial_power,
// radial_log, x_over_norm. Every example accepts "dim" (2 or 3) except
// winding, which is planar.
Example make_example(const std::string& name, const ExampleParams& params = {});

struct CatalogEntry {
  std::string name;
  std::string kind;  // "scalar" or "map"
  std::string params;
  std::string distortion_class;
  std::string expected_modulus;
  std::vector<std::string> flags;
};

std::vector<CatalogEntry> list_examples();

GridPtr example_grid(const Example& ex, int resolution);
ScalarField sample_scalar(const Example& ex, const GridPtr& grid);
VectorMap sample_map(const Example& ex, const GridPtr& grid);
// Analytic K and Sigma on the grid; Sigma may hold +inf at singular points.
DistortionData sample_data(const Example& ex, const GridPtr& grid, double p,
                           double q);
// 1 for cells whose center lies within `radius_in_h` cell widths of a
// declared singular point.
std::vector<std::uint8_t> singular_cells(const Example& ex, const Grid& grid,
                                         double radius_in_h = 2.0);

}  // namespace fdlab

#endif  // FDLAB_GALLERY_H_
