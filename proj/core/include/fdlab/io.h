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

#ifndef FDLAB_IO_H_
#define FDLAB_IO_H_

#include <optional>
#include <string>
#include <vector>

#include "fdlab/field.h"

namespace fdlab {

// A parsed field file: exactly one of `scalar` and `map` is set.
struct FieldFile {
  GridPtr grid;
  std::optional<ScalarField> scalar;
  std::optional<VectorMap> map;
};

// JSON text with keys dim, shape, origin, spacing, domain and either values
// (scalar) or components (map). Arrays cover the full box in row-major order
// with null at unmasked cells.
std::string field_to_json(const ScalarField& field);
std::string field_to_json(const VectorMap& map);
FieldFile field_from_json(const std::string& text);

void write_field_file(const std::string& path, const ScalarField& field);
void write_field_file(const std::string& path, const VectorMap& map);
FieldFile read_field_file(const std::string& path);

// Shortest text that parses back to the same double; inf/nan spelled out.
std::string format_number(double v);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string to_csv(const Table& table);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace fdlab

#endif  // FDLAB_IO_H_
