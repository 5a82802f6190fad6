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

#include "fdlab/io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "fdlab/error.h"

namespace fdlab {

namespace {

using nlohmann::json;

json DomainToJson(const Grid& g) {
  if (const auto* ball = std::get_if<BallDomain>(&g.domain())) {
    return json{{"ball", {{"center", ball->center}, {"radius", ball->radius}}}};
  }
  const auto& box = std::get<BoxDomain>(g.domain());
  bool lattice = true;
  for (int i = 0; i < g.dim(); ++i) {
    lattice = lattice && box.lo[i] == g.origin()[i] &&
              box.hi[i] == g.origin()[i] + g.shape()[i] * g.spacing();
  }
  if (lattice) return "box";
  return json{{"box", {{"lo", box.lo}, {"hi", box.hi}}}};
}

json HeaderJson(const Grid& g) {
  json j;
  j["dim"] = g.dim();
  j["shape"] = g.shape();
  j["origin"] = g.origin();
  j["spacing"] = g.spacing();
  j["domain"] = DomainToJson(g);
  return j;
}

json FullArray(const ScalarField& f) {
  const Grid& g = f.grid();
  json arr = json::array();
  for (std::size_t cell = 0; cell < g.cell_count(); ++cell) {
    const std::size_t k = g.index_of(cell);
    if (k == Grid::kUnmasked) {
      arr.push_back(nullptr);
    } else {
      arr.push_back(f[k]);
    }
  }
  return arr;
}

std::vector<double> RealArray(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw Error(std::string("field file: '") + key + "' must be an array");
  }
  std::vector<double> out;
  for (const json& v : j[key]) {
    if (!v.is_number()) {
      throw Error(std::string("field file: '") + key + "' must hold numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

Domain DomainFromJson(const json& d, int dim, const std::vector<int>& shape,
                      const std::vector<double>& origin, double spacing) {
  if (d.is_string() && d.get<std::string>() == "box") {
    BoxDomain box{origin, origin};
    for (int i = 0; i < dim; ++i) box.hi[i] = origin[i] + shape[i] * spacing;
    return box;
  }
  if (d.is_object() && d.contains("ball")) {
    const json& b = d["ball"];
    if (!b.is_object() || !b.contains("radius") || !b["radius"].is_number()) {
      throw Error("field file: ball domain needs center and radius");
    }
    BallDomain ball{RealArray(b, "center"), b["radius"].get<double>()};
    if (static_cast<int>(ball.center.size()) != dim) {
      throw Error("field file: ball center has the wrong dimension");
    }
    return ball;
  }
  if (d.is_object() && d.contains("box")) {
    const json& b = d["box"];
    BoxDomain box{RealArray(b, "lo"), RealArray(b, "hi")};
    if (static_cast<int>(box.lo.size()) != dim ||
        static_cast<int>(box.hi.size()) != dim) {
      throw Error("field file: box bounds have the wrong dimension");
    }
    return box;
  }
  throw Error("field file: domain must be \"box\" or {\"ball\": {...}}");
}

ScalarField ValuesFromJson(const json& arr, const GridPtr& grid,
                           const std::string& what) {
  if (!arr.is_array() || arr.size() != grid->cell_count()) {
    throw Error("field file: " + what + " must be an array of " +
                std::to_string(grid->cell_count()) + " entries");
  }
  std::vector<double> values(grid->masked_count());
  for (std::size_t cell = 0; cell < grid->cell_count(); ++cell) {
    const std::size_t k = grid->index_of(cell);
    const json& v = arr[cell];
    if (k == Grid::kUnmasked) {
      if (!v.is_null()) {
        throw Error("field file: " + what + " entry " + std::to_string(cell) +
                    " lies outside the domain and must be null");
      }
      continue;
    }
    if (!v.is_number()) {
      throw Error("field file: " + what + " entry " + std::to_string(cell) +
                  " lies inside the domain and must be a number");
    }
    values[k] = v.get<double>();
  }
  return ScalarField(grid, std::move(values));
}

}  // namespace

std::string field_to_json(const ScalarField& field) {
  json j = HeaderJson(field.grid());
  j["values"] = FullArray(field);
  return j.dump() + "\n";
}

std::string field_to_json(const VectorMap& map) {
  json j = HeaderJson(map.grid());
  json comps = json::array();
  for (const ScalarField& c : map.components()) comps.push_back(FullArray(c));
  j["components"] = std::move(comps);
  return j.dump() + "\n";
}

FieldFile field_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("field file: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error("field file: top level must be an object");
  if (!j.contains("dim") || !j["dim"].is_number_integer()) {
    throw Error("field file: 'dim' must be an integer");
  }
  const int dim = j["dim"].get<int>();
  if (!j.contains("shape") || !j["shape"].is_array()) {
    throw Error("field file: 'shape' must be an array");
  }
  std::vector<int> shape;
  for (const json& s : j["shape"]) {
    if (!s.is_number_integer()) {
      throw Error("field file: 'shape' must hold integers");
    }
    shape.push_back(s.get<int>());
  }
  const std::vector<double> origin = RealArray(j, "origin");
  if (!j.contains("spacing") || !j["spacing"].is_number()) {
    throw Error("field file: 'spacing' must be a number");
  }
  const double spacing = j["spacing"].get<double>();
  if (static_cast<int>(shape.size()) != dim ||
      static_cast<int>(origin.size()) != dim) {
    throw Error("field file: shape and origin must have 'dim' entries");
  }
  if (!j.contains("domain")) throw Error("field file: missing 'domain'");
  Domain domain = DomainFromJson(j["domain"], dim, shape, origin, spacing);
  FieldFile out;
  out.grid = std::make_shared<const Grid>(dim, shape, origin, spacing,
                                          std::move(domain));
  const bool has_values = j.contains("values");
  const bool has_components = j.contains("components");
  if (has_values == has_components) {
    throw Error("field file: exactly one of 'values' and 'components'");
  }
  if (has_values) {
    out.scalar = ValuesFromJson(j["values"], out.grid, "values");
    return out;
  }
  const json& comps = j["components"];
  if (!comps.is_array() || static_cast<int>(comps.size()) != dim) {
    throw Error("field file: 'components' must hold 'dim' arrays");
  }
  std::vector<ScalarField> fields;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    fields.push_back(ValuesFromJson(comps[i], out.grid,
                                    "components[" + std::to_string(i) + "]"));
  }
  out.map = VectorMap(std::move(fields));
  return out;
}

void write_field_file(const std::string& path, const ScalarField& field) {
  write_text_file(path, field_to_json(field));
}

void write_field_file(const std::string& path, const VectorMap& map) {
  write_text_file(path, field_to_json(map));
}

FieldFile read_field_file(const std::string& path) {
  return field_from_json(read_text_file(path));
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string to_csv(const Table& table) {
  std::ostringstream out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "") << format_number(row[c]);
    }
    out << "\n";
  }
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace fdlab
