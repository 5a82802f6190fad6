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

#ifndef FDLAB_TOOLS_CLI_H_
#define FDLAB_TOOLS_CLI_H_

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fdlab/error.h"
#include "fdlab/gallery.h"
#include "fdlab/grid.h"

namespace fdlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerification = 2;

// Bad command line; maps to exit code 1.
class UsageError : public Error {
 public:
  using Error::Error;
};

enum class Format { kJson, kCsv };

struct CommandPlan {
  // gallery-list, gallery-export, analyze, sobolev, distribution, staircase,
  // monotonicity, modulus; "help" when only usage text was requested.
  std::string subcommand;
  std::string help_text;
  std::vector<std::string> inputs;

  std::optional<double> p;
  std::optional<double> q;
  std::optional<double> gamma;
  std::optional<double> epsilon;
  std::optional<double> rel_tol;
  std::vector<double> radii;
  std::optional<Point> center;
  std::optional<Point> y0;
  int samples = 256;
  std::optional<int> resolution;

  std::string example;
  ExampleParams params;
  std::optional<std::string> k_path;
  std::optional<std::string> sigma_path;

  std::string check = "all";              // sobolev
  std::optional<std::pair<double, double>> band;
  std::optional<double> power;            // distribution positive power
  int max_steps = 10000;                  // staircase
  int component = 0;                      // monotonicity chain
  std::optional<double> level;
  std::string mode = "above";
  std::optional<double> dyadic_R;
  int levels = 8;

  Format format = Format::kJson;
  std::string out;  // empty writes to stdout
};

// Throws UsageError.
CommandPlan parse_command(const std::vector<std::string>& args);

// Writes the report and any artifacts; returns the exit code. Errors are
// reported on `err` and mapped to exit code 1.
int execute(const CommandPlan& plan, std::ostream& out, std::ostream& err);

// parse_command + execute with the exit-code mapping of the binary.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace fdlab::cli

#endif  // FDLAB_TOOLS_CLI_H_
