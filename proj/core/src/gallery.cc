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

#include "fdlab/gallery.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "fdlab/error.h"

namespace fdlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double Norm(const Point& x, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

// Fills defaults and rejects unknown keys.
ExampleParams Resolve(const std::string& name, const ExampleParams& given,
                      ExampleParams defaults) {
  for (const auto& [key, value] : given) {
    if (!defaults.contains(key)) {
      throw Error("example '" + name + "' has no parameter '" + key + "'");
    }
    if (!std::isfinite(value)) {
      throw Error("parameter '" + key + "' must be finite");
    }
    defaults[key] = value;
  }
  return defaults;
}

int Dim(const std::string& name, const ExampleParams& p) {
  const double d = p.at("dim");
  if (d != 2.0 && d != 3.0) {
    throw Error("example '" + name + "': dim must be 2 or 3");
  }
  return static_cast<int>(d);
}

ScalarEvaluator Constant(double c) {
  return [c](const Point&) { return c; };
}

BallDomain CenteredBall(int dim, double radius) {
  return BallDomain{std::vector<double>(dim, 0.0), radius};
}

Example Identity(const ExampleParams& given) {
  Example ex;
  ex.params = Resolve("identity", given, {{"dim", 2}});
  ex.dim = Dim("identity", ex.params);
  ex.map = [](const Point& x) { return x; };
  ex.analytic_K = Constant(1.0);
  ex.analytic_Sigma = Constant(0.0);
  ex.distortion_class = "conformal (K = 1)";
  ex.expected_modulus = "lipschitz";
  ex.default_domain = UnitBall(ex.dim);
  return ex;
}

Example Linear(const ExampleParams& given) {
  ExampleParams defaults{{"dim", 2}};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      defaults["a" + std::to_string(r) + std::to_string(c)] = r == c ? 1 : 0;
    }
  }
  Example ex;
  ex.params = Resolve("linear", given, defaults);
  ex.dim = Dim("linear", ex.params);
  const int n = ex.dim;
  std::vector<double> a(n * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      a[r * n + c] = ex.params["a" + std::to_string(r) + std::to_string(c)];
    }
  }
  ex.map = [a, n](const Point& x) {
    Point y{};
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) y[r] += a[r * n + c] * x[c];
    }
    return y;
  };
  const double norm_n = std::pow(OperatorNorm(a, n), n);
  const double det = Determinant(a, n);
  if (det > 0.0) {
    ex.analytic_K = Constant(norm_n / det);
    ex.analytic_Sigma = Constant(0.0);
    ex.distortion_class = "quasiconformal";
  } else {
    ex.analytic_K = Constant(1.0);
    ex.analytic_Sigma = Constant(norm_n - det);
    ex.distortion_class = "orientation-reversing, bounded defect";
    ex.flags.push_back("non-orientation-preserving");
  }
  ex.expected_modulus = "lipschitz";
  ex.default_domain = UnitBall(n);
  return ex;
}

Example Cone(const ExampleParams& given) {
  Example ex;
  ex.params = Resolve("cone", given, {{"dim", 2}, {"c", 1}, {"R", 1}});
  ex.dim = Dim("cone", ex.params);
  const double c = ex.params["c"];
  const double radius = ex.params["R"];
  if (!(radius > 0.0)) throw Error("cone: R must be positive");
  const int n = ex.dim;
  ex.kind = ExampleKind::kScalar;
  ex.scalar = [c, radius, n](const Point& x) {
    return c * std::max(0.0, 1.0 - Norm(x, n) / radius);
  };
  ex.distortion_class = "scalar";
  ex.expected_modulus = "lipschitz";
  ex.singular_points.push_back(Point{});
  ex.default_domain = CenteredBall(n, radius);
  return ex;
}

Example Bump(const ExampleParams& given) {
  Example ex;
  ex.params = Resolve("bump", given,
                      {{"dim", 2},
                       {"cx", 0},
                       {"cy", 0},
                       {"cz", 0},
                       {"radius", 0.5},
                       {"amplitude", 1}});
  ex.dim = Dim("bump", ex.params);
  const double radius = ex.params["radius"];
  if (!(radius > 0.0)) throw Error("bump: radius must be positive");
  const Point center{ex.params["cx"], ex.params["cy"], ex.params["cz"]};
  const double amp = ex.params["amplitude"];
  const int n = ex.dim;
  ex.kind = ExampleKind::kScalar;
  ex.scalar = [center, radius, amp, n](const Point& x) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += (x[i] - center[i]) * (x[i] - center[i]);
    const double t = s / (radius * radius);
    return t < 1.0 ? amp * std::exp(1.0 - 1.0 / (1.0 - t)) : 0.0;
  };
  ex.distortion_class = "scalar";
  ex.expected_modulus = "lipschitz";
  ex.flags.push_back("compact-support");
  ex.default_domain = UnitBall(n);
  return ex;
}

Example Winding(const ExampleParams& given) {
  Example ex;
  ex.params = Resolve("winding", given, {{"dim", 2}, {"k", 2}});
  if (ex.params["dim"] != 2.0) throw Error("winding: planar only (dim = 2)");
  const double k = ex.params["k"];
  if (!(k >= 1.0) || k != std::floor(k)) {
    throw Error("winding: k must be an integer >= 1");
  }
  ex.dim = 2;
  const int power = static_cast<int>(k);
  ex.map = [power](const Point& x) {
    const std::complex<double> z(x[0], x[1]);
    const double r = std::abs(z);
    if (r == 0.0) return Point{};
    const std::complex<double> w = r * std::pow(z / r, power);
    return Point{w.real(), w.imag(), 0.0};
  };
  ex.analytic_K = Constant(k);
  ex.analytic_Sigma = Constant(0.0);
  ex.distortion_class = "quasiregular";
  ex.expected_modulus = "lipschitz";
  ex.singular_points.push_back(Point{});
  ex.default_domain = UnitBall(2);
  return ex;
}

Example RadialPower(const ExampleParams& given) {
  Example ex;
  ex.params = Resolve("radial_power", given, {{"dim", 2}, {"a", 2}});
  ex.dim = Dim("radial_power", ex.params);
  const double a = ex.params["a"];
  if (!(a > 0.0)) throw Error("radial_power: a must be positive");
  const int n = ex.dim;
  ex.map = [a, n](const Point& x) {
    const double r = Norm(x, n);
    if (r == 0.0) return Point{};
    const double s = std::pow(r, a - 1.0);
    return Point{s * x[0], s * x[1], s * x[2]};
  };
  // Singular values a r^(a-1) (radial) and r^(a-1) (tangential).
  ex.analytic_K = Constant(std::pow(std::max(a, 1.0), n) / a);
  ex.analytic_Sigma = Constant(0.0);
  ex.distortion_class = "quasiregular";
  ex.expected_modulus =
      a >= 1.0 ? "lipschitz" : "holder " + std::to_string(a);
  ex.singular_points.push_back(Point{});
  ex.default_domain = UnitBall(n);
  return ex;
}

Example RadialLog(const ExampleParams& given) {
  Example ex;
  ex.params = Resolve("radial_log", given, {{"dim", 2}, {"clamp", 1}});
  ex.dim = Dim("radial_log", ex.params);
  const int n = ex.dim;
  const bool clamp = ex.params["clamp"] != 0.0;
  ex.map = [n](const Point& x) {
    const double r = Norm(x, n);
    if (r == 0.0) return Point{};
    if (r >= 1.0) throw Error("radial_log is defined on the open unit ball");
    const double s = std::pow(std::log(1.0 / r), -1.0 / n) / r;
    return Point{s * x[0], s * x[1], s * x[2]};
  };
  ex.analytic_K = [n, clamp](const Point& x) {
    const double r = std::max(Norm(x, n), std::numeric_limits<double>::min());
    const double k = n * std::log(1.0 / r);
    return clamp ? std::max(1.0, k) : k;
  };
  ex.analytic_Sigma = Constant(0.0);
  ex.distortion_class = "finite distortion, K in L^p for all p < inf";
  ex.expected_modulus = "log^-1/" + std::to_string(n);
  ex.singular_points.push_back(Point{});
  ex.flags.push_back("unbounded-K");
  if (clamp) ex.flags.push_back("K-clamped");
  // n log(1/r) = 1 here; beyond it the clamp is active and the exact
  // distortion exceeds the clamped K.
  ex.clamp_radius = std::exp(-1.0 / n);
  ex.default_domain = CenteredBall(n, 0.5);
  return ex;
}

Example XOverNorm(const ExampleParams& given) {
  Example ex;
  ex.params = Resolve("x_over_norm", given, {{"dim", 2}});
  ex.dim = Dim("x_over_norm", ex.params);
  const int n = ex.dim;
  ex.map = [n](const Point& x) {
    const double r = Norm(x, n);
    if (r == 0.0) return Point{};
    return Point{x[0] / r, x[1] / r, x[2] / r};
  };
  ex.analytic_K = Constant(1.0);
  ex.analytic_Sigma = [n](const Point& x) {
    const double r = Norm(x, n);
    return r == 0.0 ? kInf : std::pow(r, -n);
  };
  ex.distortion_class = "defect only, Sigma not in L^1";
  ex.expected_modulus = "discontinuous";
  ex.singular_points.push_back(Point{});
  ex.flags.push_back("non-integrable-defect");
  ex.default_domain = UnitBall(n);
  return ex;
}

const std::vector<std::string>& Names() {
  static const std::vector<std::string> names = {
      "identity", "linear",     "cone",       "bump",
      "winding",  "radial_power", "radial_log", "x_over_norm"};
  return names;
}

const char* ParamDoc(const std::string& name) {
  if (name == "linear") return "dim, a00..a22";
  if (name == "cone") return "dim, c, R";
  if (name == "bump") return "dim, cx, cy, cz, radius, amplitude";
  if (name == "winding") return "k";
  if (name == "radial_power") return "dim, a";
  if (name == "radial_log") return "dim, clamp";
  return "dim";
}

}  // namespace

bool Example::has_flag(const std::string& flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

Example make_example(const std::string& name, const ExampleParams& params) {
  Example ex;
  if (name == "identity") {
    ex = Identity(params);
  } else if (name == "linear") {
    ex = Linear(params);
  } else if (name == "cone") {
    ex = Cone(params);
  } else if (name == "bump") {
    ex = Bump(params);
  } else if (name == "winding") {
    ex = Winding(params);
  } else if (name == "radial_power") {
    ex = RadialPower(params);
  } else if (name == "radial_log") {
    ex = RadialLog(params);
  } else if (name == "x_over_norm") {
    ex = XOverNorm(params);
  } else {
    throw Error("unknown example '" + name + "'");
  }
  ex.name = name;
  return ex;
}

std::vector<CatalogEntry> list_examples() {
  std::vector<CatalogEntry> out;
  for (const std::string& name : Names()) {
    const Example ex = make_example(name);
    out.push_back({name, ex.kind == ExampleKind::kScalar ? "scalar" : "map",
                   ParamDoc(name), ex.distortion_class, ex.expected_modulus,
                   ex.flags});
  }
  return out;
}

GridPtr example_grid(const Example& ex, int resolution) {
  return build_grid(ex.default_domain, resolution);
}

ScalarField sample_scalar(const Example& ex, const GridPtr& grid) {
  if (ex.kind != ExampleKind::kScalar) {
    throw Error("example '" + ex.name + "' is a map, not a scalar field");
  }
  if (grid->dim() != ex.dim) throw Error("grid and example dimension differ");
  return sample(grid, ex.scalar);
}

VectorMap sample_map(const Example& ex, const GridPtr& grid) {
  if (ex.kind != ExampleKind::kMap) {
    throw Error("example '" + ex.name + "' is a scalar field, not a map");
  }
  if (grid->dim() != ex.dim) throw Error("grid and example dimension differ");
  return sample(grid, ex.map);
}

DistortionData sample_data(const Example& ex, const GridPtr& grid, double p,
                           double q) {
  if (!ex.analytic_K || !ex.analytic_Sigma) {
    throw Error("example '" + ex.name + "' has no analytic distortion data");
  }
  if (grid->dim() != ex.dim) throw Error("grid and example dimension differ");
  std::vector<double> k(grid->masked_count());
  std::vector<double> s(grid->masked_count());
  for (std::size_t c = 0; c < k.size(); ++c) {
    const Point x = grid->masked_center(c);
    k[c] = (*ex.analytic_K)(x);
    s[c] = (*ex.analytic_Sigma)(x);
  }
  return DistortionData(ScalarField(grid, std::move(k), true), std::move(s), p,
                        q);
}

std::vector<std::uint8_t> singular_cells(const Example& ex, const Grid& grid,
                                         double radius_in_h) {
  std::vector<std::uint8_t> out(grid.masked_count(), 0);
  const double r = radius_in_h * grid.spacing();
  for (std::size_t c = 0; c < out.size(); ++c) {
    const Point x = grid.masked_center(c);
    for (const Point& s : ex.singular_points) {
      double d = 0.0;
      for (int i = 0; i < grid.dim(); ++i) d += (x[i] - s[i]) * (x[i] - s[i]);
      if (std::sqrt(d) <= r) out[c] = 1;
    }
  }
  return out;
}

}  // namespace fdlab
