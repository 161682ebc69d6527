// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Runs the ceo_region binary as a subprocess.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"

#include "ceo/io.h"
#include "frozen_values.h"

namespace ceo {
namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliRun Cli(const std::string& args) {
  const std::string err_path = ::testing::TempDir() + "ceo_cli_stderr.txt";
  const std::string cmd = std::string(CEO_CLI_PATH) + " " + args + " 2>" + err_path;
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = Slurp(err_path);
  return r;
}

std::string Data(const std::string& name) { return std::string(CEO_DATA_DIR "/") + name; }

std::string WriteTemp(const std::string& name, const std::string& text) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << text;
  return path;
}

std::vector<std::vector<double>> ParseCsv(const std::string& text, std::string* header) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      *header = line;
      first = false;
      continue;
    }
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

TEST(CliBoundTest, ScalarInstance) {
  const CliRun r = Cli("bound " + Data("scalar_tight.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["value"].get<double>(), frozen::kScalarTightValue, 1e-6);
  EXPECT_NEAR(j["exact_region_value"].get<double>(), frozen::kScalarTightValue, 1e-10);
  EXPECT_EQ(j["units"], "nats");
  EXPECT_TRUE(j["feasible"].get<bool>());
  EXPECT_EQ(j["per_subset"].size(), 3u);
}

TEST(CliBoundTest, BitsScaleEveryRate) {
  const auto nats = nlohmann::json::parse(Cli("bound " + Data("aligned_l3.json")).out);
  const auto bits =
      nlohmann::json::parse(Cli("bound " + Data("aligned_l3.json") + " --units bits").out);
  EXPECT_NEAR(bits["value"].get<double>(), nats["value"].get<double>() / std::log(2.0), 1e-12);
  EXPECT_NEAR(bits["per_subset"]["{1,2,3}"].get<double>(),
              nats["per_subset"]["{1,2,3}"].get<double>() / std::log(2.0), 1e-12);
  EXPECT_NEAR(bits["vertex"][0].get<double>(), nats["vertex"][0].get<double>() / std::log(2.0),
              1e-12);
  EXPECT_EQ(bits["allocation"], nats["allocation"]);
}

TEST(CliBoundTest, MuFlagOverridesFile) {
  const CliRun r = Cli("bound " + Data("gap_demo.json") + " --mu 1,1");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["mu"], nlohmann::json::array({1.0, 1.0}));
  const auto file_mu = nlohmann::json::parse(Cli("bound " + Data("gap_demo.json")).out);
  EXPECT_EQ(file_mu["mu"], nlohmann::json::array({4.0, 1.0}));
  EXPECT_NEAR(file_mu["value"].get<double>(), frozen::kGapTplus, 1e-6);
}

TEST(CliBoundTest, KindsOnGeneralInstance) {
  EXPECT_EQ(Cli("bound " + Data("general_rank_deficient.json")).code, 2);
  const CliRun r = Cli("bound " + Data("general_rank_deficient.json") + " --kind general-outer");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["frame"], "general");
  EXPECT_EQ(Cli("bound " + Data("aligned_l3.json") + " --kind chen-wang").code, 2);
}

TEST(CliBoundTest, ExitCodes) {
  EXPECT_EQ(Cli("").code, 1);
  EXPECT_EQ(Cli("bound /nonexistent.json").code, 1);
  EXPECT_EQ(Cli("bound " + Data("gap_demo.json") + " --kind sideways").code, 1);
  EXPECT_EQ(Cli("bound " + Data("gap_demo.json") + " --mu 1,x").code, 1);
  EXPECT_EQ(Cli("bound " + Data("gap_demo.json") + " --mu 1,2,3").code, 2);
  const std::string low = WriteTemp(
      "low.json", R"({"model": "scalar", "var_x": 1, "noise_vars": [1, 1], "distortion": 0.2})");
  const CliRun r = Cli("bound " + low + " --mu 1,1");
  EXPECT_EQ(r.code, 2);
  const auto pos = r.err.find('{');
  ASSERT_NE(pos, std::string::npos);
  std::istringstream err(r.err.substr(pos));
  nlohmann::json diag;
  err >> diag;
  EXPECT_FALSE(diag["lower_ok"].get<bool>());
  EXPECT_TRUE(r.out.empty());
}

TEST(CliBoundTest, SkipUpperCheck) {
  const std::string high = WriteTemp(
      "high.json", R"({"model": "scalar", "var_x": 1, "noise_vars": [1, 1], "distortion": 1.5})");
  EXPECT_EQ(Cli("bound " + high + " --mu 1,1").code, 2);
  EXPECT_EQ(Cli("bound " + high + " --mu 1,1 --skip-upper-check").code, 0);
}

TEST(CliBoundTest, DumpNormalizedRoundTrips) {
  for (const char* name : {"aligned_l3.json", "scalar_tight.json", "parallel_counterexample.json",
                           "general_rank_deficient.json", "gap_demo.json"}) {
    const CliRun r = Cli("bound " + Data(name) + " --dump-normalized");
    ASSERT_EQ(r.code, 0) << name << r.err;
    EXPECT_EQ(r.out, dump_instance(load_instance(Data(name)))) << name;
    const std::string again = WriteTemp("normalized.json", r.out);
    EXPECT_EQ(Cli("bound " + again + " --dump-normalized").out, r.out) << name;
  }
}

TEST(CliTraceTest, DefaultSweepAndKinds) {
  const CliRun outer = Cli("trace " + Data("scalar_tight.json"));
  ASSERT_EQ(outer.code, 0) << outer.err;
  std::string header;
  const auto rows = ParseCsv(outer.out, &header);
  EXPECT_EQ(header, "mu1,mu2,value");
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows.front()[1], 0.1);
  EXPECT_EQ(rows.back()[1], 10.0);
  EXPECT_NE(outer.out.find("\r\n"), std::string::npos);

  const CliRun inner = Cli("trace " + Data("scalar_tight.json") + " --kind inner");
  ASSERT_EQ(inner.code, 0) << inner.err;
  std::string h2;
  const auto inner_rows = ParseCsv(inner.out, &h2);
  ASSERT_EQ(inner_rows.size(), rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    EXPECT_NEAR(rows[i][2], inner_rows[i][2], 1e-6) << i;
  }
}

TEST(CliTraceTest, ChenWangBelowOuter) {
  const std::string args = " --mu-sweep 0.2:5:6";
  const CliRun outer = Cli("trace " + Data("gap_demo.json") + args);
  const CliRun cw = Cli("trace " + Data("gap_demo.json") + args + " --kind chen-wang");
  ASSERT_EQ(outer.code, 0);
  ASSERT_EQ(cw.code, 0);
  std::string h;
  const auto a = ParseCsv(outer.out, &h);
  const auto b = ParseCsv(cw.out, &h);
  ASSERT_EQ(a.size(), 6u);
  ASSERT_EQ(b.size(), 6u);
  for (size_t i = 0; i < a.size(); ++i) EXPECT_LE(b[i][2], a[i][2] + 1e-6) << i;
}

TEST(CliTraceTest, OutFileAndBadSweep) {
  const std::string path = ::testing::TempDir() + "trace.csv";
  const CliRun r = Cli("trace " + Data("scalar_tight.json") + " --mu-sweep 1:2:2 --out " + path);
  ASSERT_EQ(r.code, 0) << r.err;
  std::string h;
  EXPECT_EQ(ParseCsv(Slurp(path), &h).size(), 2u);
  EXPECT_EQ(Cli("trace " + Data("scalar_tight.json") + " --mu-sweep 1:2").code, 1);
}

TEST(CliDemoTest, GapAndParallel) {
  const CliRun gap = Cli("demo gap");
  ASSERT_EQ(gap.code, 0) << gap.err;
  const auto g = nlohmann::json::parse(gap.out);
  EXPECT_EQ(g["conclusion"], "pass");
  EXPECT_NEAR(g["quantities"]["gap"].get<double>(), frozen::kGapGap, 1e-12);
  const CliRun par = Cli("demo parallel");
  ASSERT_EQ(par.code, 0) << par.err;
  EXPECT_NEAR(nlohmann::json::parse(par.out)["quantities"]["tp"].get<double>(), frozen::kParTp,
              1e-10);
}

TEST(CliDemoTest, FailingAssumptionsExit4) {
  const CliRun r = Cli("demo gap --d 0.5");
  EXPECT_EQ(r.code, 4);
  EXPECT_EQ(nlohmann::json::parse(r.out)["conclusion"], "fail");
  EXPECT_NE(r.err.find("assumption fails"), std::string::npos);
  EXPECT_EQ(Cli("demo parallel --d2-frac 0.5").code, 4);
}

TEST(CliVerifyTest, Suites) {
  for (const char* suite : {"supermodularity", "dominance"}) {
    const CliRun r = Cli("verify " + Data("aligned_l3.json") + " --suite " + suite + " --trials 20");
    ASSERT_EQ(r.code, 0) << suite << r.err;
    EXPECT_TRUE(nlohmann::json::parse(r.out)["pass"].get<bool>());
  }
  const CliRun e = Cli("verify " + Data("general_rank_deficient.json") + " --suite enhancement");
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_TRUE(nlohmann::json::parse(e.out)["pass"].get<bool>());
  EXPECT_EQ(Cli("verify " + Data("aligned_l3.json") + " --suite bogus").code, 1);
}

}  // namespace
}  // namespace ceo
