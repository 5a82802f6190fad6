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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli.h"

namespace fdlab::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fdlab_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  std::string Export(const std::string& example, int resolution,
                     const std::vector<std::string>& params = {}) {
    const std::string path = Path(example + std::to_string(resolution) + ".json");
    std::vector<std::string> args{"gallery", "--export", example, "--resolution",
                                  std::to_string(resolution), "--out", path};
    for (const auto& p : params) {
      args.push_back("--param");
      args.push_back(p);
    }
    const Result r = Invoke(args);
    EXPECT_EQ(r.code, kExitOk) << r.err;
    return path;
  }

  fs::path dir_;
};

TEST(ParseCommand, Examples) {
  EXPECT_EQ(parse_command({"gallery", "--list"}).subcommand, "gallery-list");
  const CommandPlan p =
      parse_command({"sobolev", "field.json", "--check", "superlevel"});
  EXPECT_EQ(p.subcommand, "sobolev");
  EXPECT_EQ(p.inputs, std::vector<std::string>{"field.json"});
  EXPECT_EQ(p.check, "superlevel");
  EXPECT_THROW(parse_command({"distortion"}), UsageError);
}

TEST(ParseCommand, FlagsAndValidation) {
  const CommandPlan p = parse_command(
      {"monotonicity", "f.json", "--radii", "0.1,0.2,0.4", "--center", "0.5,-0.25",
       "--samples", "64", "--format", "csv", "--out", "o.csv", "--p", "4", "--q",
       "inf"});
  EXPECT_EQ(p.radii, (std::vector<double>{0.1, 0.2, 0.4}));
  ASSERT_TRUE(p.center.has_value());
  EXPECT_EQ((*p.center)[0], 0.5);
  EXPECT_EQ((*p.center)[1], -0.25);
  EXPECT_EQ(p.samples, 64);
  EXPECT_EQ(p.format, Format::kCsv);
  EXPECT_EQ(p.out, "o.csv");
  EXPECT_EQ(*p.p, 4.0);
  EXPECT_TRUE(std::isinf(*p.q));

  EXPECT_THROW(parse_command({}), UsageError);
  EXPECT_THROW(parse_command({"frobnicate"}), UsageError);
  EXPECT_THROW(parse_command({"sobolev", "f.json", "--bogus"}), UsageError);
  EXPECT_THROW(parse_command({"gallery", "--list", "--export", "cone"}), UsageError);
  EXPECT_THROW(parse_command({"gallery"}), UsageError);
  EXPECT_THROW(parse_command({"sobolev", "f.json", "--format", "xml"}), UsageError);
  EXPECT_THROW(parse_command({"sobolev", "f.json", "--check", "nope"}), UsageError);
  EXPECT_THROW(parse_command({"staircase", "f.json", "--epsilon", "abc"}),
               UsageError);
  EXPECT_THROW(parse_command({"monotonicity", "f.json", "--radii", "0.1,x"}),
               UsageError);
  EXPECT_THROW(parse_command({"monotonicity", "f.json", "--center", "1,2,3,4"}),
               UsageError);
  EXPECT_THROW(parse_command({"gallery", "--export", "cone", "--param", "c"}),
               UsageError);
}

TEST(ParseCommand, HelpIsNotAnError) {
  const Result r = Invoke({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("analyze"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitOne) {
  const Result r = Invoke({"distortion"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(Invoke({"sobolev", Path("missing.json")}).code, kExitUsage);
}

TEST_F(CliTest, GalleryListJson) {
  const Result r = Invoke({"gallery", "--list"});
  ASSERT_EQ(r.code, kExitOk);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["examples"].size(), 8u);
}

TEST_F(CliTest, RadialLogAnalyzeEndToEnd) {
  const std::string f = Export("radial_log", 128);
  const Result r = Invoke({"analyze", f, "--p", "4", "--q", "4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["violation_count"], 0);
  EXPECT_EQ(j["provenance"]["subcommand"], "analyze");
  EXPECT_EQ(j["provenance"]["shape"], json::array({128, 128}));

  const Result a = Invoke({"analyze", "--example", "radial_log", "--resolution",
                        "128", "--p", "4", "--q", "4"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(json::parse(a.out)["violation_count"], 0);
}

TEST_F(CliTest, AnalyzeReportsViolations) {
  const std::string f = Export("x_over_norm", 32);
  const std::string k = Path("k.json");
  // K = 10 with no defect: J vanishes, so nearly every cell fails.
  const std::string tmpl = Export("cone", 32, {"c=0", "R=1"});
  std::string text;
  {
    std::ifstream in(tmpl);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  json j = json::parse(text);
  for (auto& v : j["values"]) {
    if (!v.is_null()) v = 10.0;
  }
  std::ofstream(k) << j.dump();
  const Result r = Invoke({"analyze", f, "--K", k, "--p", "inf", "--q", "inf"});
  EXPECT_EQ(r.code, kExitVerification) << r.err;
  EXPECT_GT(json::parse(r.out)["violation_count"].get<int>(), 500);
}

TEST_F(CliTest, SobolevConeRatio) {
  const std::string f = Export("cone", 256);
  const Result r = Invoke({"sobolev", f, "--check", "superlevel"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["checks"]["superlevel"]["ratio"].get<double>(), 1.0, 0.02);
}

TEST_F(CliTest, NegativeValueNamesCell) {
  const std::string f = Export("cone", 8);
  std::string text;
  {
    std::ifstream in(f);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  json j = json::parse(text);
  std::size_t first = 0;
  while (j["values"][first].is_null()) ++first;
  j["values"][first + 3] = -1.0;
  std::ofstream(Path("neg.json")) << j.dump();
  const Result r = Invoke({"distribution", Path("neg.json")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("cell 3"), std::string::npos) << r.err;
}

TEST_F(CliTest, MalformedInput) {
  std::ofstream(Path("bad.json")) << "{\"dim\": 2}";
  const Result r = Invoke({"sobolev", Path("bad.json")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("field file"), std::string::npos);
}

TEST_F(CliTest, DeterministicReports) {
  const std::string f = Export("cone", 64);
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"sobolev", f},
           {"distribution", f, "--gamma", "0.5", "--power", "2"},
           {"staircase", f, "--gamma", "0.5", "--epsilon", "0.25"},
           {"monotonicity", f, "--radii", "0.1,0.2,0.3,0.4"}}) {
    const Result a = Invoke(args);
    const Result b = Invoke(args);
    EXPECT_EQ(a.code, kExitOk) << args[0] << ": " << a.err;
    EXPECT_EQ(a.out, b.out) << args[0];
  }
}

TEST_F(CliTest, CsvOutputs) {
  const std::string f = Export("cone", 32);
  const std::string out = Path("stairs.csv");
  const Result r = Invoke({"staircase", f, "--gamma", "0.5", "--epsilon", "0.5",
                        "--max-steps", "3", "--format", "csv", "--out", out});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "i,t,F");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST_F(CliTest, ModulusExample) {
  const Result r = Invoke({"modulus", "--example", "radial_log"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  const double beta = j["fit"]["beta"].get<double>();
  EXPECT_GE(beta, 0.45);
  EXPECT_LE(beta, 0.55);
}

TEST_F(CliTest, MonotonicityChainOnMap) {
  const std::string f = Export("winding", 64, {"k=2"});
  const Result r = Invoke({"monotonicity", f, "--p", "4", "--q", "4", "--radii",
                        "0.1,0.2,0.3"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_TRUE(j.contains("chain"));
  EXPECT_TRUE(j.contains("defect_fit"));
}

}  // namespace
}  // namespace fdlab::cli
