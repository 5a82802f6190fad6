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

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fdlab/distortion.h"
#include "fdlab/distribution.h"
#include "fdlab/io.h"
#include "fdlab/monotonicity.h"
#include "fdlab/sobolev.h"
#include "fdlab/staircase.h"

#ifndef FDLAB_VERSION
#define FDLAB_VERSION "dev"
#endif

namespace fdlab::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr double kInf = std::numeric_limits<double>::infinity();
// Default pointwise tolerance when K and Sigma come from analytic formulas.
constexpr double kAnalyticRelTol = 0.03;

// ---------------------------------------------------------------- parsing

double ParseReal(const std::string& text, const std::string& what) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), ::tolower);
  if (t == "inf" || t == "+inf" || t == "infinity") return kInf;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError(what + ": '" + text + "' is not a number");
  }
}

std::vector<double> ParseList(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(ParseReal(item, what));
  if (out.empty()) throw UsageError(what + ": empty list");
  return out;
}

Point ParsePoint(const std::string& text, const std::string& what) {
  const std::vector<double> v = ParseList(text, what);
  if (v.size() < 2 || v.size() > 3) {
    throw UsageError(what + " needs 2 or 3 coordinates");
  }
  Point p{};
  std::copy(v.begin(), v.end(), p.begin());
  return p;
}

ExampleParams ParseParams(const std::vector<std::string>& items) {
  ExampleParams out;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("--param expects key=value, got '" + item + "'");
    }
    out[item.substr(0, eq)] = ParseReal(item.substr(eq + 1), "--param");
  }
  return out;
}

struct RawOptions {
  std::vector<std::string> inputs;
  std::string p, q, gamma, epsilon, rel_tol, radii, center, y0, band, power;
  std::string level, dyadic_R;
  int samples = 256;
  int resolution = 0;
  int max_steps = 10000;
  int component = 0;
  int levels = 8;
  std::string example, k_path, sigma_path, check = "all", mode = "above";
  std::vector<std::string> params;
  std::string format = "json", out;
  bool list = false;
  std::string export_name;
};

void AddOutput(CLI::App* sub, RawOptions& o) {
  sub->add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", o.out, "Output path (default stdout)");
}

void AddInput(CLI::App* sub, RawOptions& o, bool required) {
  auto* opt = sub->add_option("input", o.inputs, "Field file");
  if (required) opt->required();
}

void AddData(CLI::App* sub, RawOptions& o) {
  sub->add_option("--p", o.p, "Integrability exponent of K (inf allowed)");
  sub->add_option("--q", o.q, "Integrability exponent of Sigma/K");
  sub->add_option("--K", o.k_path, "Field file holding K");
  sub->add_option("--sigma", o.sigma_path, "Field file holding Sigma");
  sub->add_option("--example", o.example,
                  "Take K and Sigma from this gallery example");
  sub->add_option("--param", o.params, "Example parameter key=value");
}

void AddBallSweep(CLI::App* sub, RawOptions& o) {
  sub->add_option("--center", o.center, "Center x,y[,z]");
  sub->add_option("--radii", o.radii, "Radii a,b,c");
  sub->add_option("--samples", o.samples, "Sphere samples");
}

CommandPlan Finish(const std::string& sub, RawOptions& o) {
  CommandPlan plan;
  plan.subcommand = sub;
  plan.inputs = o.inputs;
  plan.format = o.format == "csv" ? Format::kCsv : Format::kJson;
  plan.out = o.out;
  plan.example = o.example;
  plan.params = ParseParams(o.params);
  if (!o.k_path.empty()) plan.k_path = o.k_path;
  if (!o.sigma_path.empty()) plan.sigma_path = o.sigma_path;
  plan.check = o.check;
  plan.mode = o.mode;
  plan.samples = o.samples;
  plan.max_steps = o.max_steps;
  plan.component = o.component;
  plan.levels = o.levels;

  if (!o.p.empty()) plan.p = ParseReal(o.p, "--p");
  if (!o.q.empty()) plan.q = ParseReal(o.q, "--q");
  for (const auto& [v, name] : {std::pair{plan.p, "--p"}, {plan.q, "--q"}}) {
    if (v && !(*v >= 1.0)) {
      throw UsageError(std::string(name) + " must lie in [1, inf]");
    }
  }
  if (!o.gamma.empty()) {
    plan.gamma = ParseReal(o.gamma, "--gamma");
    if (!(*plan.gamma > 0.0) || std::isinf(*plan.gamma)) {
      throw UsageError("--gamma must be positive and finite");
    }
  }
  if (!o.epsilon.empty()) {
    plan.epsilon = ParseReal(o.epsilon, "--epsilon");
    if (!(*plan.epsilon > 0.0) || std::isinf(*plan.epsilon)) {
      throw UsageError("--epsilon must be positive and finite");
    }
  }
  if (!o.rel_tol.empty()) {
    plan.rel_tol = ParseReal(o.rel_tol, "--rel-tol");
    if (!(*plan.rel_tol >= 0.0)) throw UsageError("--rel-tol must be >= 0");
  }
  if (!o.power.empty()) {
    plan.power = ParseReal(o.power, "--power");
    if (!(*plan.power > 0.0) || std::isinf(*plan.power)) {
      throw UsageError("--power must be positive and finite");
    }
  }
  if (!o.radii.empty()) {
    plan.radii = ParseList(o.radii, "--radii");
    for (double r : plan.radii) {
      if (!(r > 0.0) || std::isinf(r)) {
        throw UsageError("--radii must be positive and finite");
      }
    }
  }
  if (!o.center.empty()) plan.center = ParsePoint(o.center, "--center");
  if (!o.y0.empty()) plan.y0 = ParsePoint(o.y0, "--y0");
  if (!o.band.empty()) {
    const std::vector<double> ab = ParseList(o.band, "--band");
    if (ab.size() != 2) throw UsageError("--band expects a,b");
    plan.band = std::pair{ab[0], ab[1]};
  }
  if (!o.level.empty()) plan.level = ParseReal(o.level, "--level");
  if (!o.dyadic_R.empty()) {
    plan.dyadic_R = ParseReal(o.dyadic_R, "--R");
    if (!(*plan.dyadic_R > 0.0) || std::isinf(*plan.dyadic_R)) {
      throw UsageError("--R must be positive and finite");
    }
  }
  if (o.resolution != 0) {
    if (o.resolution < 2) throw UsageError("--resolution must be >= 2");
    plan.resolution = o.resolution;
  }
  if (plan.samples < 8) throw UsageError("--samples must be >= 8");
  if (plan.max_steps < 1) throw UsageError("--max-steps must be >= 1");
  if (plan.levels < 2) throw UsageError("--levels must be >= 2");
  if (plan.component < 0 || plan.component > 2) {
    throw UsageError("--component must be 0, 1 or 2");
  }
  if (plan.mode != "above" && plan.mode != "below") {
    throw UsageError("--mode must be above or below");
  }
  if (sub == "analyze" && plan.inputs.empty() && plan.example.empty()) {
    throw UsageError("analyze needs a field file or --example");
  }
  if (!plan.example.empty() && (plan.k_path || plan.sigma_path)) {
    throw UsageError("--example conflicts with --K/--sigma");
  }
  if (plan.example.empty() && !plan.params.empty() &&
      sub != "gallery-export") {
    throw UsageError("--param needs --example");
  }
  return plan;
}

// ---------------------------------------------------------------- output

json Num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json PointJson(const Point& x, int dim) {
  json a = json::array();
  for (int i = 0; i < dim; ++i) a.push_back(x[i]);
  return a;
}

struct StrTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

std::string Cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string Str(double v) { return format_number(v); }
std::string Str(bool v) { return v ? "true" : "false"; }

std::string ToCsv(const StrTable& t) {
  std::ostringstream out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    out << (c ? "," : "") << Cell(t.columns[c]);
  }
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "") << Cell(row[c]);
    }
    out << "\n";
  }
  return out.str();
}

// Flattens scalar members of a JSON object into key,value rows.
void Flatten(const json& j, const std::string& prefix, StrTable& t) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      Flatten(v, prefix.empty() ? k : prefix + "." + k, t);
    }
  } else if (j.is_array()) {
    if (j.size() <= 3 &&
        std::all_of(j.begin(), j.end(), [](const json& e) {
          return e.is_primitive();
        })) {
      std::string s;
      for (const json& e : j) {
        s += (s.empty() ? "" : " ") +
             (e.is_string() ? e.get<std::string>() : e.dump());
      }
      t.add({prefix, s});
    }
  } else if (j.is_string()) {
    t.add({prefix, j.get<std::string>()});
  } else {
    t.add({prefix, j.dump()});
  }
}

StrTable KeyValue(const json& j) {
  StrTable t{"report", {"key", "value"}, {}};
  Flatten(j, "", t);
  return t;
}

void WriteText(const CommandPlan& plan, const std::string& path_suffix,
               const std::string& text, std::ostream& out) {
  if (plan.out.empty()) {
    out << text;
    return;
  }
  std::string path = plan.out;
  if (!path_suffix.empty()) {
    const std::filesystem::path p(plan.out);
    path = (p.parent_path() / (p.stem().string() + "." + path_suffix +
                               p.extension().string()))
               .string();
  }
  write_text_file(path, text);
}

// JSON: the whole report. CSV: the first table goes to --out, the others to
// sibling files <stem>.<name>.csv (or follow on stdout after a "# name" line).
void Emit(const CommandPlan& plan, const json& report,
          const std::vector<StrTable>& tables, std::ostream& out) {
  if (plan.format == Format::kJson) {
    WriteText(plan, "", report.dump(2) + "\n", out);
    return;
  }
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (plan.out.empty()) {
      if (i) out << "\n# " << tables[i].name << "\n";
      out << ToCsv(tables[i]);
    } else {
      WriteText(plan, i ? tables[i].name : "", ToCsv(tables[i]), out);
    }
  }
}

json Provenance(const CommandPlan& plan, const Grid* grid) {
  json p;
  p["version"] = FDLAB_VERSION;
  p["subcommand"] = plan.subcommand;
  if (!plan.inputs.empty()) p["inputs"] = plan.inputs;
  if (grid) {
    p["dim"] = grid->dim();
    p["shape"] = grid->shape();
    p["spacing"] = grid->spacing();
    p["masked_cells"] = grid->masked_count();
    p["measure"] = grid->measure();
    p["domain"] =
        std::holds_alternative<BallDomain>(grid->domain()) ? "ball" : "box";
  }
  return p;
}

// ---------------------------------------------------------------- inputs

FieldFile LoadOne(const CommandPlan& plan) {
  if (plan.inputs.size() != 1) {
    throw UsageError(plan.subcommand + " expects exactly one field file");
  }
  return read_field_file(plan.inputs.front());
}

ScalarField RequireScalar(const FieldFile& f, const std::string& what) {
  if (!f.scalar) throw Error(what + " expects a scalar field file");
  return *f.scalar;
}

VectorMap RequireMap(const FieldFile& f, const std::string& what) {
  if (!f.map) throw Error(what + " expects a map (components) field file");
  return *f.map;
}

ScalarField LoadOnGrid(const std::string& path, const GridPtr& grid,
                       const std::string& what) {
  const FieldFile f = read_field_file(path);
  if (!f.scalar) throw Error(what + " file must hold a scalar field");
  if (!(*f.grid == *grid)) {
    throw Error(what + " file is sampled on a different grid");
  }
  return ScalarField(grid, std::vector<double>(f.scalar->values().begin(),
                                               f.scalar->values().end()));
}

Point DomainCenter(const Grid& g) {
  Point c{};
  if (const auto* ball = std::get_if<BallDomain>(&g.domain())) {
    for (int i = 0; i < g.dim(); ++i) c[i] = ball->center[i];
  } else {
    const auto& box = std::get<BoxDomain>(g.domain());
    for (int i = 0; i < g.dim(); ++i) c[i] = 0.5 * (box.lo[i] + box.hi[i]);
  }
  return c;
}

// Distance from x to the domain boundary.
double Inradius(const Grid& g, const Point& x) {
  if (const auto* ball = std::get_if<BallDomain>(&g.domain())) {
    double d = 0.0;
    for (int i = 0; i < g.dim(); ++i) {
      d += (x[i] - ball->center[i]) * (x[i] - ball->center[i]);
    }
    return ball->radius - std::sqrt(d);
  }
  const auto& box = std::get<BoxDomain>(g.domain());
  double r = kInf;
  for (int i = 0; i < g.dim(); ++i) {
    r = std::min({r, x[i] - box.lo[i], box.hi[i] - x[i]});
  }
  return r;
}

Point CheckedCenter(const CommandPlan& plan, const Grid& g) {
  const Point c = plan.center.value_or(DomainCenter(g));
  if (plan.center) {
    for (int i = g.dim(); i < kMaxDim; ++i) {
      if (c[i] != 0.0) throw Error("--center has more coordinates than dim");
    }
  }
  return c;
}

struct DataSource {
  DistortionData data;
  std::vector<std::uint8_t> excluded;
  double rel_tol;
  std::string origin;
  std::optional<Example> example;
};

DataSource LoadData(const CommandPlan& plan, const VectorMap& map) {
  const GridPtr& grid = map.grid_ptr();
  const double p = plan.p.value_or(kInf);
  const double q = plan.q.value_or(kInf);
  if (!plan.example.empty()) {
    Example ex = make_example(plan.example, plan.params);
    if (ex.dim != grid->dim()) {
      throw Error("example dimension does not match the field file");
    }
    DistortionData data = sample_data(ex, grid, p, q);
    std::vector<std::uint8_t> excluded = singular_cells(ex, *grid, 2.0);
    return {std::move(data), std::move(excluded),
            plan.rel_tol.value_or(kAnalyticRelTol), "example:" + ex.name,
            std::move(ex)};
  }
  ScalarField K = [&] {
    if (plan.k_path) return LoadOnGrid(*plan.k_path, grid, "--K");
    const PointwiseDistortion pd = pointwise_distortion(map);
    std::vector<double> k(pd.K.size());
    for (std::size_t c = 0; c < k.size(); ++c) {
      k[c] = pd.defined[c] ? std::max(1.0, pd.K[c]) : 1.0;
    }
    return ScalarField(grid, std::move(k), true);
  }();
  std::vector<double> sigma;
  if (plan.sigma_path) {
    const ScalarField s = LoadOnGrid(*plan.sigma_path, grid, "--sigma");
    sigma.assign(s.values().begin(), s.values().end());
  } else if (plan.k_path) {
    sigma.assign(grid->masked_count(), 0.0);
  } else {
    const ScalarField s = residual_defect(map, K);
    sigma.assign(s.values().begin(), s.values().end());
  }
  std::string origin = plan.k_path ? "file" : "pointwise";
  origin += plan.sigma_path ? "+file" : plan.k_path ? "+zero" : "+residual";
  return {DistortionData(std::move(K), std::move(sigma), p, q),
          {},
          plan.rel_tol.value_or(kPointwiseRelTol),
          origin,
          std::nullopt};
}

// ---------------------------------------------------------------- commands

int GalleryList(const CommandPlan& plan, std::ostream& out) {
  json report;
  report["provenance"] = Provenance(plan, nullptr);
  json list = json::array();
  StrTable t{"examples",
             {"name", "kind", "params", "distortion_class", "expected_modulus",
              "flags"},
             {}};
  for (const CatalogEntry& e : list_examples()) {
    std::string flags;
    for (const std::string& f : e.flags) flags += (flags.empty() ? "" : " ") + f;
    list.push_back({{"name", e.name},
                    {"kind", e.kind},
                    {"params", e.params},
                    {"distortion_class", e.distortion_class},
                    {"expected_modulus", e.expected_modulus},
                    {"flags", e.flags}});
    t.add({e.name, e.kind, e.params, e.distortion_class, e.expected_modulus,
           flags});
  }
  report["examples"] = list;
  Emit(plan, report, {t}, out);
  return kExitOk;
}

int GalleryExport(const CommandPlan& plan, std::ostream& out) {
  if (plan.format == Format::kCsv) {
    throw UsageError("gallery --export writes the JSON field format only");
  }
  const Example ex = make_example(plan.example, plan.params);
  const GridPtr grid = example_grid(ex, plan.resolution.value_or(128));
  const std::string text = ex.kind == ExampleKind::kScalar
                               ? field_to_json(sample_scalar(ex, grid))
                               : field_to_json(sample_map(ex, grid));
  WriteText(plan, "", text, out);
  return kExitOk;
}

int Analyze(const CommandPlan& plan, std::ostream& out) {
  const VectorMap map = [&] {
    if (plan.inputs.empty()) {
      const Example ex = make_example(plan.example, plan.params);
      return sample_map(ex, example_grid(ex, plan.resolution.value_or(128)));
    }
    return RequireMap(LoadOne(plan), "analyze");
  }();
  const DataSource src = LoadData(plan, map);
  VerifyOptions opts;
  opts.y0 = plan.y0;
  opts.rel_tol = src.rel_tol;
  opts.excluded = src.excluded;
  const DistortionReport r = verify_distortion(map, src.data, opts);
  const Grid& g = map.grid();
  const int n = g.dim();

  json report;
  report["provenance"] = Provenance(plan, &g);
  report["provenance"]["tolerances"] = {{"pointwise_rel", r.rel_tol},
                                        {"jacobian_gate", kJacobianGate}};
  report["data_source"] = src.origin;
  report["p"] = Num(src.data.p);
  report["q"] = Num(src.data.q);
  report["admissible"] = src.data.admissible();
  report["violation_count"] = r.violation_count;
  report["max_violation"] = Num(r.max_violation);
  report["max_relative_violation"] = Num(r.max_relative_violation);
  report["K_norm_p"] = Num(r.K_norm_p);
  report["sigma_over_K_norm_q"] = Num(r.sigma_over_K_norm_q);
  report["infinite_sigma_cells"] = r.infinite_sigma_cells;
  report["checked_cells"] = r.checked_cells;
  report["excluded_cells"] =
      std::count(src.excluded.begin(), src.excluded.end(), 1);
  if (r.holder_exponent) report["holder_exponent"] = Num(*r.holder_exponent);
  if (plan.y0) report["y0"] = PointJson(*plan.y0, n);
  if (src.example && src.example->clamp_radius) {
    std::size_t clamped = 0;
    for (std::size_t k = 0; k < g.masked_count(); ++k) {
      const Point x = g.masked_center(k);
      double d = 0.0;
      for (int i = 0; i < n; ++i) d += x[i] * x[i];
      if (std::sqrt(d) > *src.example->clamp_radius) ++clamped;
    }
    report["clamp_radius"] = *src.example->clamp_radius;
    report["clamped_cells"] = clamped;
  }
  StrTable viol{"violations", {"cell", "x", "y", "z", "lhs", "rhs"}, {}};
  json vlist = json::array();
  for (const Violation& v : r.violations) {
    const Point x = g.masked_center(v.cell);
    viol.add({std::to_string(v.cell), Str(x[0]), Str(x[1]), Str(x[2]),
              Str(v.lhs), Str(v.rhs)});
    if (vlist.size() < 20) {
      vlist.push_back({{"cell", v.cell},
                       {"center", PointJson(x, n)},
                       {"lhs", Num(v.lhs)},
                       {"rhs", Num(v.rhs)}});
    }
  }
  report["first_violations"] = vlist;
  Emit(plan, report, {KeyValue(report), viol}, out);
  return r.violation_count == 0 ? kExitOk : kExitVerification;
}

json ReportJson(const InequalityReport& r) {
  return {{"lhs", Num(r.lhs)},         {"rhs", Num(r.rhs)},
          {"ratio", Num(r.ratio)},     {"holds", r.holds},
          {"rel_tol", r.rel_tol},      {"abs_tol", r.abs_tol},
          {"support_warning", r.support_warning}};
}

int Sobolev(const CommandPlan& plan, std::ostream& out) {
  const FieldFile file = LoadOne(plan);
  const ScalarField f = RequireScalar(file, "sobolev");
  const std::string& which = plan.check;
  if (which != "sharp" && which != "superlevel" && which != "band" &&
      which != "all") {
    throw UsageError("--check must be sharp, superlevel, band or all");
  }
  std::vector<std::pair<std::string, InequalityReport>> results;
  if (which == "sharp" || which == "all") {
    results.emplace_back("sharp", sharp_sobolev_check(f));
  }
  if (which == "superlevel" || which == "all") {
    results.emplace_back("superlevel", superlevel_check(f));
  }
  json band_params;
  if (which == "band" || which == "all") {
    const double a = plan.band ? plan.band->first : 0.25 * f.max();
    const double b = plan.band ? plan.band->second : 0.75 * f.max();
    results.emplace_back("band", band_bound_check(f, a, b));
    band_params = {{"a", a}, {"b", b}};
  }
  json report;
  report["provenance"] = Provenance(plan, file.grid.get());
  report["provenance"]["tolerances"] = {{"rel", kInequalityRelTol},
                                        {"abs", kInequalityAbsTol}};
  StrTable t{"checks",
             {"check", "lhs", "rhs", "ratio", "holds", "support_warning"},
             {}};
  bool failed = false;
  for (const auto& [name, r] : results) {
    report["checks"][name] = ReportJson(r);
    t.add({name, Str(r.lhs), Str(r.rhs), Str(r.ratio), Str(r.holds),
           Str(r.support_warning)});
    // The inequalities are only claimed for fields vanishing at the boundary.
    if (!r.holds && !r.support_warning) failed = true;
  }
  if (!band_params.is_null()) report["checks"]["band"]["params"] = band_params;
  report["verified"] = !failed;
  Emit(plan, report, {t}, out);
  return failed ? kExitVerification : kExitOk;
}

json PowerJson(const PowerIntegralResult& r) {
  return {{"value", Num(r.value)},
          {"trimmed_value", Num(r.trimmed_value)},
          {"bound", Num(r.bound)},
          {"relation", ToString(r.relation)},
          {"matches_expected", r.matches_expected}};
}

int Distribution(const CommandPlan& plan, std::ostream& out) {
  const FieldFile file = LoadOne(plan);
  const ScalarField f = RequireScalar(file, "distribution");
  const StepDistribution up = upper_distribution(f);
  const double gamma = plan.gamma.value_or(0.5);
  const double power = plan.power.value_or(1.0);
  const CavalieriResult cav = cavalieri_residual(f);
  std::vector<double> a_values;
  for (int k = 0; k <= 8; ++k) a_values.push_back(up.total() * k / 8.0);
  const std::vector<LevelBoundReport> bounds = verify_level_bounds(f, a_values);
  const PowerIntegralResult neg_u = neg_power_integral(up, gamma, Which::kUpper);
  const PowerIntegralResult neg_l = neg_power_integral(up, gamma, Which::kLower);
  const PowerIntegralResult pos_u = pos_power_integral(up, power, Which::kUpper);
  const PowerIntegralResult pos_l = pos_power_integral(up, power, Which::kLower);

  json report;
  report["provenance"] = Provenance(plan, file.grid.get());
  report["provenance"]["gamma"] = gamma;
  report["provenance"]["power"] = power;
  report["provenance"]["tolerances"] = {{"cavalieri_rel", 1e-12}};
  report["levels"] = up.level_count();
  report["total_measure"] = up.total();
  report["max_value"] = up.max_level();
  report["cavalieri"] = {{"integral", cav.integral},
                         {"area_upper", cav.area_upper},
                         {"area_lower", cav.area_lower},
                         {"max_relative_residual", cav.max_relative_residual()}};
  json jb = json::array();
  bool ok = cav.max_relative_residual() <= 1e-12;
  for (const LevelBoundReport& b : bounds) {
    jb.push_back({{"a", b.a},
                  {"lower_set_measure", b.lower_set_measure},
                  {"upper_set_measure", b.upper_set_measure},
                  {"lower_holds", b.lower_holds},
                  {"upper_holds", b.upper_holds}});
    ok = ok && b.lower_holds && b.upper_holds;
  }
  report["level_bounds"] = jb;
  report["neg_power"] = {{"gamma", gamma},
                         {"upper", PowerJson(neg_u)},
                         {"lower", PowerJson(neg_l)}};
  report["pos_power"] = {{"r", power},
                         {"upper", PowerJson(pos_u)},
                         {"lower", PowerJson(pos_l)}};
  ok = ok && neg_u.matches_expected && neg_l.matches_expected &&
       pos_u.matches_expected && pos_l.matches_expected;
  report["verified"] = ok;

  StrTable curve{"curve", {"level", "upper", "lower"}, {}};
  for (std::size_t j = 0; j < up.level_count(); ++j) {
    curve.add({Str(up.levels()[j]), Str(up.upper_at(j)), Str(up.lower_at(j))});
  }
  Emit(plan, report, {curve, KeyValue(report)}, out);
  return ok ? kExitOk : kExitVerification;
}

int Staircase(const CommandPlan& plan, std::ostream& out) {
  const FieldFile file = LoadOne(plan);
  const ScalarField f = RequireScalar(file, "staircase");
  const double gamma = plan.gamma.value_or(0.5);
  const double eps = plan.epsilon.value_or(0.1);
  const StaircaseResult r =
      inverse_distribution_staircase(f, gamma, eps, plan.max_steps);
  const double deviation =
      max_gap_deviation(InverseUpperPower(upper_distribution(f), gamma), r);
  json report;
  report["provenance"] = Provenance(plan, file.grid.get());
  report["provenance"]["gamma"] = gamma;
  report["provenance"]["epsilon"] = eps;
  report["provenance"]["max_steps"] = plan.max_steps;
  report["case"] = ToString(r.kind);
  report["s"] = Num(r.s);
  report["steps"] = r.breakpoints.size();
  report["max_gap_deviation"] = Num(deviation);
  const bool ok = deviation <= eps * (1.0 + 1e-12);
  report["verified"] = ok;
  json pts = json::array();
  StrTable t{"steps", {"i", "t", "F"}, {}};
  for (std::size_t i = 0; i < r.breakpoints.size(); ++i) {
    pts.push_back({Num(r.breakpoints[i]), Num(r.values[i])});
    t.add({std::to_string(i), Str(r.breakpoints[i]), Str(r.values[i])});
  }
  report["breakpoints"] = pts;
  Emit(plan, report, {t}, out);
  return ok ? kExitOk : kExitVerification;
}

json LedgerJson(const ChainLedger& L) {
  json j;
  j["trivial"] = L.trivial;
  j["component"] = L.component;
  j["mode"] = L.mode == TruncateMode::kAbove ? "above" : "below";
  j["level"] = L.level;
  j["gamma"] = L.gamma;
  j["gamma_q"] = L.gamma_q;
  j["gamma_p"] = L.gamma_p;
  j["measure"] = L.measure;
  j["measure_exponent"] = L.measure_exponent;
  j["constant"] = Num(L.constant);
  j["quantities"] = {{"sup_phi_n", Num(L.sup_phi_n)},
                     {"superlevel_integral", Num(L.superlevel_integral)},
                     {"superlevel_rhs", Num(L.superlevel_rhs)},
                     {"energy", Num(L.energy)},
                     {"K_norm_p", Num(L.K_norm_p)},
                     {"T", Num(L.T)},
                     {"holder_rhs", Num(L.holder_rhs)},
                     {"weighted_jacobian", Num(L.weighted_jacobian)},
                     {"defect_integral", Num(L.defect_integral)},
                     {"sigma_over_K_norm_q", Num(L.sigma_over_K_norm_q)},
                     {"Q", Num(L.Q)},
                     {"energy_bound", Num(L.energy_bound)},
                     {"Q_bound", Num(L.Q_bound)},
                     {"T_bound", Num(L.T_bound)},
                     {"final_bound", Num(L.final_bound)},
                     {"residual_ratio", Num(L.residual_ratio)}};
  json checks = json::array();
  for (const ChainCheck& c : L.checks) {
    checks.push_back({{"name", c.name},
                      {"lhs", Num(c.lhs)},
                      {"rhs", Num(c.rhs)},
                      {"rel_tol", c.rel_tol},
                      {"holds", c.holds}});
  }
  j["checks"] = checks;
  j["all_hold"] = L.all_hold();
  return j;
}

int Monotonicity(const CommandPlan& plan, std::ostream& out) {
  const FieldFile file = LoadOne(plan);
  const Grid& g = *file.grid;
  const int n = g.dim();
  if (file.map && plan.component >= n) {
    throw UsageError("--component exceeds the map dimension");
  }
  const ScalarField f =
      file.scalar ? *file.scalar : file.map->component(plan.component);
  const Point center = CheckedCenter(plan, g);
  const double inradius = Inradius(g, center);
  if (!(inradius > 0.0)) throw Error("--center lies outside the domain");
  std::vector<double> radii = plan.radii;
  if (radii.empty()) {
    for (int k = 1; k <= 8; ++k) radii.push_back(0.1 * k * inradius);
  }
  const double R = plan.dyadic_R.value_or(0.5 * inradius);

  json report;
  report["provenance"] = Provenance(plan, &g);
  report["provenance"]["samples"] = plan.samples;
  report["provenance"]["tolerances"] = {{"defect_floor", kDefectFloor},
                                        {"chain_rel", kChainRelTol},
                                        {"chain_exact", kChainExactTol}};
  report["center"] = PointJson(center, n);

  StrTable sweep{"sweep",
                 {"radius", "boundary_max", "boundary_min", "interior_max",
                  "interior_min", "defect", "essosc"},
                 {}};
  json jsweep = json::array();
  for (double r : radii) {
    const BallExtrema e = ball_extrema(f, Ball{center, r}, plan.samples);
    const double osc = essosc(f, center, r);
    sweep.add({Str(r), Str(e.boundary_max), Str(e.boundary_min),
               Str(e.interior_max), Str(e.interior_min), Str(awm_defect(e)),
               Str(osc)});
    jsweep.push_back({{"radius", r},
                      {"boundary_max", e.boundary_max},
                      {"boundary_min", e.boundary_min},
                      {"interior_max", e.interior_max},
                      {"interior_min", e.interior_min},
                      {"defect", awm_defect(e)},
                      {"essosc", osc}});
  }
  report["sweep"] = jsweep;

  const DefectFit fit = fit_defect_law(f, center, radii, plan.samples);
  report["defect_fit"] = {{"monotone", fit.monotone},
                          {"C", fit.C},
                          {"alpha", fit.alpha},
                          {"radii_used", fit.radii_used},
                          {"residual", fit.residual}};

  const std::vector<double> partial =
      dyadic_osc_partial_sums(f, center, R, plan.levels);
  StrTable osc{"osc", {"level", "radius", "partial_sum"}, {}};
  for (std::size_t j = 0; j < partial.size(); ++j) {
    osc.add({std::to_string(j), Str(std::ldexp(R, -static_cast<int>(j))),
             Str(partial[j])});
  }
  report["dyadic_osc"] = {{"R", R},
                          {"levels", plan.levels},
                          {"partial_sums", partial},
                          {"integral", partial.back()},
                          {"smallest_radius_in_h",
                           std::ldexp(R, 1 - plan.levels) / g.spacing()}};

  // Morrey ratio with exponent n; radii whose sphere leaves the stencil
  // support are skipped.
  json morrey = json::array();
  for (double r : radii) {
    try {
      const double rr[] = {r};
      const MorreySample m = morrey_profile(f, center, rr, n, plan.samples)[0];
      morrey.push_back({{"radius", r},
                        {"oscillation", m.oscillation},
                        {"gradient_integral", m.gradient_integral},
                        {"ratio", Num(m.ratio)}});
    } catch (const Error&) {
    }
  }
  report["morrey_diagnostic"] = {{"exponent", n}, {"samples", morrey}};

  std::vector<StrTable> tables = {sweep, osc};
  bool ok = true;
  if (file.map) {
    const DataSource src = LoadData(plan, *file.map);
    const TruncateMode mode =
        plan.mode == "above" ? TruncateMode::kAbove : TruncateMode::kBelow;
    double level = 0.0;
    if (plan.level) {
      level = *plan.level;
    } else {
      // Extreme value over boundary-adjacent cells, so the truncation
      // vanishes at the boundary.
      level = mode == TruncateMode::kAbove ? -kInf : kInf;
      for (std::size_t k = 0; k < f.size(); ++k) {
        if (!g.boundary_adjacent(k)) continue;
        level = mode == TruncateMode::kAbove ? std::max(level, f[k])
                                             : std::min(level, f[k]);
      }
    }
    const ChainLedger L =
        sup_bound_chain(*file.map, src.data, plan.component, level, mode);
    report["chain"] = LedgerJson(L);
    report["chain"]["data_source"] = src.origin;
    report["chain"]["p"] = Num(src.data.p);
    report["chain"]["q"] = Num(src.data.q);
    StrTable ledger{"ledger", {"name", "lhs", "rhs", "rel_tol", "holds"}, {}};
    for (const ChainCheck& c : L.checks) {
      ledger.add({c.name, Str(c.lhs), Str(c.rhs), Str(c.rel_tol),
                  Str(c.holds)});
    }
    tables.push_back(ledger);
    ok = L.all_hold();
  }
  report["verified"] = ok;
  Emit(plan, report, tables, out);
  return ok ? kExitOk : kExitVerification;
}

int Modulus(const CommandPlan& plan, std::ostream& out) {
  if (plan.inputs.empty() == plan.example.empty()) {
    throw UsageError("modulus needs either a field file or --example");
  }
  VectorEvaluator f;
  int dim = 0;
  Point x0{};
  std::vector<double> radii = plan.radii;
  std::optional<FieldFile> file;
  if (!plan.example.empty()) {
    const Example ex = make_example(plan.example, plan.params);
    dim = ex.dim;
    if (ex.kind == ExampleKind::kMap) {
      f = ex.map;
    } else {
      f = [s = ex.scalar](const Point& x) { return Point{s(x), 0.0, 0.0}; };
    }
    x0 = plan.center.value_or(Point{});
    if (radii.empty()) radii = {1e-6, 1e-5, 1e-4, 1e-3, 1e-2};
  } else {
    file = LoadOne(plan);
    dim = file->grid->dim();
    x0 = CheckedCenter(plan, *file->grid);
    std::vector<ScalarField> comps;
    if (file->scalar) {
      comps.push_back(*file->scalar);
    } else {
      comps = file->map->components();
    }
    f = [comps](const Point& x) {
      Point y{};
      for (std::size_t i = 0; i < comps.size(); ++i) {
        y[i] = interpolate(comps[i], x);
      }
      return y;
    };
    if (radii.empty()) {
      const double h = file->grid->spacing();
      radii = {2 * h, 4 * h, 8 * h, 16 * h};
    }
  }
  const std::vector<ModulusSample> curve =
      modulus_curve(f, dim, x0, radii, plan.samples);
  json report;
  report["provenance"] = Provenance(plan, file ? file->grid.get() : nullptr);
  report["provenance"]["samples"] = plan.samples;
  if (!plan.example.empty()) report["provenance"]["example"] = plan.example;
  report["x0"] = PointJson(x0, dim);
  json jc = json::array();
  StrTable t{"curve", {"radius", "omega"}, {}};
  for (const ModulusSample& s : curve) {
    jc.push_back({{"radius", s.radius}, {"omega", s.omega}});
    t.add({Str(s.radius), Str(s.omega)});
  }
  report["curve"] = jc;
  try {
    const ModulusFit fit = log_power_fit(curve);
    report["fit"] = {{"C", fit.C},         {"beta", fit.beta},
                     {"r_min", fit.r_min}, {"r_max", fit.r_max},
                     {"points", fit.points}, {"residual", fit.residual}};
  } catch (const Error& e) {
    report["fit"] = {{"error", e.what()}};
  }
  Emit(plan, report, {t}, out);
  return kExitOk;
}

}  // namespace

CommandPlan parse_command(const std::vector<std::string>& args) {
  CLI::App app{"Numerical laboratory for maps of finite distortion", "fdlab"};
  app.require_subcommand(1, 1);
  RawOptions o;

  auto* gallery = app.add_subcommand("gallery", "List or export examples");
  gallery->add_flag("--list", o.list, "List the catalog");
  gallery->add_option("--export", o.export_name, "Export this example");
  gallery->add_option("--param", o.params, "Example parameter key=value");
  gallery->add_option("--resolution", o.resolution, "Cells per axis");
  AddOutput(gallery, o);

  auto* analyze = app.add_subcommand("analyze", "Check the distortion inequality");
  analyze->alias("distortion");
  AddInput(analyze, o, false);
  AddData(analyze, o);
  analyze->add_option("--resolution", o.resolution,
                      "Grid resolution when sampling --example without input");
  analyze->add_option("--y0", o.y0, "Target value y0 for the weighted defect");
  analyze->add_option("--rel-tol", o.rel_tol, "Pointwise relative tolerance");
  AddOutput(analyze, o);

  auto* sobolev = app.add_subcommand("sobolev", "Sobolev-type inequalities");
  AddInput(sobolev, o, true);
  sobolev->add_option("--check", o.check, "sharp|superlevel|band|all")
      ->check(CLI::IsMember({"sharp", "superlevel", "band", "all"}));
  sobolev->add_option("--band", o.band, "Band a,b");
  AddOutput(sobolev, o);

  auto* distribution =
      app.add_subcommand("distribution", "Distribution functions");
  AddInput(distribution, o, true);
  distribution->add_option("--gamma", o.gamma, "Negative power exponent");
  distribution->add_option("--power", o.power, "Positive power exponent");
  AddOutput(distribution, o);

  auto* staircase = app.add_subcommand("staircase", "Staircase approximation");
  AddInput(staircase, o, true);
  staircase->add_option("--gamma", o.gamma, "Exponent of upper^-gamma");
  staircase->add_option("--epsilon", o.epsilon, "Uniform step size");
  staircase->add_option("--max-steps", o.max_steps, "Step limit");
  AddOutput(staircase, o);

  auto* mono = app.add_subcommand("monotonicity", "Monotonicity diagnostics");
  AddInput(mono, o, true);
  AddBallSweep(mono, o);
  AddData(mono, o);
  mono->add_option("--R", o.dyadic_R, "Outer dyadic radius");
  mono->add_option("--levels", o.levels, "Dyadic levels");
  mono->add_option("--component", o.component, "Coordinate index (0-based)");
  mono->add_option("--level", o.level, "Truncation level for the chain");
  mono->add_option("--mode", o.mode, "above|below");
  AddOutput(mono, o);

  auto* modulus = app.add_subcommand("modulus", "Modulus of continuity");
  AddInput(modulus, o, false);
  modulus->add_option("--example", o.example, "Gallery example");
  modulus->add_option("--param", o.params, "Example parameter key=value");
  AddBallSweep(modulus, o);
  AddOutput(modulus, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    CommandPlan plan;
    plan.subcommand = "help";
    std::string text = app.help();
    for (const CLI::App* sub : app.get_subcommands()) text = sub->help();
    plan.help_text = text;
    return plan;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  const CLI::App* sub = app.get_subcommands().front();
  std::string name = sub->get_name();
  if (name == "gallery") {
    if (o.list == !o.export_name.empty()) {
      throw UsageError("gallery needs exactly one of --list and --export");
    }
    if (o.list && (!o.params.empty() || o.resolution != 0)) {
      throw UsageError("--param and --resolution only apply to --export");
    }
    if (o.list) {
      name = "gallery-list";
    } else {
      name = "gallery-export";
      o.example = o.export_name;
    }
  }
  return Finish(name, o);
}

int execute(const CommandPlan& plan, std::ostream& out, std::ostream& err) {
  try {
    const std::string& s = plan.subcommand;
    if (s == "help") {
      out << plan.help_text;
      return kExitOk;
    }
    if (s == "gallery-list") return GalleryList(plan, out);
    if (s == "gallery-export") return GalleryExport(plan, out);
    if (s == "analyze") return Analyze(plan, out);
    if (s == "sobolev") return Sobolev(plan, out);
    if (s == "distribution") return Distribution(plan, out);
    if (s == "staircase") return Staircase(plan, out);
    if (s == "monotonicity") return Monotonicity(plan, out);
    if (s == "modulus") return Modulus(plan, out);
    throw UsageError("unknown subcommand '" + s + "'");
  } catch (const std::exception& e) {
    err << "fdlab: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CommandPlan plan;
  try {
    plan = parse_command(args);
  } catch (const std::exception& e) {
    err << "fdlab: " << e.what() << "\nRun 'fdlab --help' for usage.\n";
    return kExitUsage;
  }
  return execute(plan, out, err);
}

}  // namespace fdlab::cli
