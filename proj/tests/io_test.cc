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

#include "ceo/io.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "ceo/errors.h"

namespace ceo {
namespace {

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorCode ParseCode(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const CeoError& e) {
    return e.code();
  }
  ADD_FAILURE() << "parsed: " << text;
  return ErrorCode::kInvalidArgument;
}

class RoundTripTest : public ::testing::TestWithParam<const char*> {};

TEST_P(RoundTripTest, DumpParsesBackEqual) {
  const InstanceFile f = load_instance(std::string(CEO_DATA_DIR "/") + GetParam());
  const std::string dumped = dump_instance(f);
  const InstanceFile g = parse_instance(dumped);
  EXPECT_TRUE(f == g);
  EXPECT_EQ(dump_instance(g), dumped);
}

INSTANTIATE_TEST_SUITE_P(DataFiles, RoundTripTest,
                         ::testing::Values("aligned_l3.json", "scalar_tight.json",
                                           "gap_demo.json", "parallel_counterexample.json",
                                           "general_rank_deficient.json"));

TEST(ParseInstanceTest, AlignedFile) {
  const InstanceFile f = load_instance(CEO_DATA_DIR "/aligned_l3.json");
  EXPECT_EQ(f.model, ModelKind::kAligned);
  EXPECT_EQ(f.num_sensors(), 3);
  EXPECT_EQ(f.AsAligned().dim(), 2);
  EXPECT_EQ(*f.mu, (std::vector<double>{3, 2, 1}));
  EXPECT_DOUBLE_EQ(f.Target().d()(0, 1), 0.05);
  EXPECT_EQ(f.AsGeneral().num_sensors(), 3);
}

TEST(ParseInstanceTest, ScalarAndParallelEmbed) {
  const InstanceFile s = load_instance(CEO_DATA_DIR "/scalar_tight.json");
  EXPECT_EQ(s.model, ModelKind::kScalar);
  EXPECT_DOUBLE_EQ(s.Target().d()(0, 0), 0.4);
  EXPECT_DOUBLE_EQ(s.AsAligned().noise(1)(0, 0), 0.8);
  const InstanceFile p = load_instance(CEO_DATA_DIR "/parallel_counterexample.json");
  EXPECT_EQ(p.model, ModelKind::kParallel);
  EXPECT_EQ(p.AsAligned().dim(), 2);
  EXPECT_TRUE(p.Target().d().IsDiagonal());
}

TEST(ParseInstanceTest, GeneralFile) {
  const InstanceFile f = load_instance(CEO_DATA_DIR "/general_rank_deficient.json");
  EXPECT_EQ(f.model, ModelKind::kGeneral);
  EXPECT_EQ(f.general->channel(0)(1, 1), 0.0);
  EXPECT_THROW(f.AsAligned(), CeoError);
}

TEST(ParseInstanceTest, DistortionScalarMeansMultipleOfIdentity) {
  const InstanceFile f = parse_instance(R"({"model": "aligned", "kx": [[1, 0], [0, 1]],
      "sensors": [{"sigma": [[1, 0], [0, 1]]}], "distortion": 0.8})");
  EXPECT_DOUBLE_EQ(f.Target().d()(1, 1), 0.8);
  EXPECT_DOUBLE_EQ(f.Target().d()(0, 1), 0.0);
  EXPECT_FALSE(f.mu.has_value());
}

TEST(ParseInstanceTest, SchemaErrors) {
  EXPECT_EQ(ParseCode("{"), ErrorCode::kParseError);
  EXPECT_EQ(ParseCode("[]"), ErrorCode::kParseError);
  EXPECT_EQ(ParseCode(R"({"model": "triangle"})"), ErrorCode::kParseError);
  EXPECT_EQ(ParseCode(R"({"model": "scalar", "var_x": 1, "noise_vars": [1],
      "distortion": 0.6, "extra": 1})"),
            ErrorCode::kParseError);
  EXPECT_EQ(ParseCode(R"({"model": "scalar", "noise_vars": [1], "distortion": 0.6})"),
            ErrorCode::kParseError);
  EXPECT_EQ(ParseCode(R"({"model": "scalar", "var_x": "1", "noise_vars": [1],
      "distortion": 0.6})"),
            ErrorCode::kParseError);
  EXPECT_EQ(ParseCode(R"({"model": "aligned", "kx": [[1, 0], [0]],
      "sensors": [{"sigma": [[1]]}], "distortion": 0.5})"),
            ErrorCode::kParseError);
  EXPECT_EQ(ParseCode(R"({"model": "aligned", "kx": [[1]], "sensors": [],
      "distortion": 0.5})"),
            ErrorCode::kParseError);
}

TEST(ParseInstanceTest, ModelErrorsKeepTheirCodes) {
  EXPECT_EQ(ParseCode(R"({"model": "aligned", "kx": [[1, 2], [0, 1]],
      "sensors": [{"sigma": [[1, 0], [0, 1]]}], "distortion": 0.5})"),
            ErrorCode::kNotSymmetric);
  EXPECT_EQ(ParseCode(R"({"model": "aligned", "kx": [[1]],
      "sensors": [{"sigma": [[-1]]}], "distortion": 0.5})"),
            ErrorCode::kNotPositiveDefinite);
  EXPECT_EQ(ParseCode(R"({"model": "scalar", "var_x": 1, "noise_vars": [1, 1],
      "distortion": 0.6, "mu": [1]})"),
            ErrorCode::kWrongSensorCount);
}

TEST(NumberJsonTest, NonFiniteValues) {
  EXPECT_EQ(number_json(INFINITY), "inf");
  EXPECT_EQ(number_json(-INFINITY), "-inf");
  EXPECT_EQ(number_json(NAN), "nan");
  EXPECT_EQ(number_json(1.5), 1.5);
}

TEST(ReportJsonTest, KeysAndUnits) {
  BoundReport r;
  r.kind = TangentKind::kOuter;
  r.value = 2.0;
  r.feasibility.ok = true;
  r.allocation.mats = {SymMatrix::Scalar(0.5), SymMatrix::Scalar(0.25)};
  r.per_subset = {{0, 0.0}, {1, 1.0}, {2, kInfiniteRate}, {3, 2.0}};
  r.vertex = {1.0, 1.0};
  const auto j = report_json(r, 2, 0.5);
  EXPECT_EQ(j["kind"], "outer");
  EXPECT_EQ(j["value"], 1.0);
  EXPECT_EQ(j["frame"], "aligned");
  EXPECT_FALSE(j["per_subset"].contains("{}"));
  EXPECT_EQ(j["per_subset"]["{1}"], 0.5);
  EXPECT_EQ(j["per_subset"]["{2}"], "inf");
  EXPECT_EQ(j["per_subset"]["{1,2}"], 1.0);
  EXPECT_EQ(j["vertex"][1], 0.5);
  EXPECT_EQ(j["allocation"][1][0][0], 0.25);
}

TEST(CsvTest, NumberFormatting) {
  EXPECT_EQ(format_csv_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_csv_number(2.0), "2");
  EXPECT_EQ(format_csv_number(INFINITY), "inf");
  EXPECT_EQ(std::stod(format_csv_number(M_PI)), M_PI);
}

TEST(CsvTest, TraceLayout) {
  std::vector<TraceRow> rows(2);
  rows[0].mu = {1.0, 0.5};
  rows[0].report.value = 1.0;
  rows[1].mu = {1.0, 2.0};
  rows[1].report.value = 3.0;
  EXPECT_EQ(trace_csv(rows, 1.0), "mu1,mu2,value\r\n1,0.5,1\r\n1,2,3\r\n");
}

TEST(DataFilesTest, GapDemoFileMatchesDemoInstance) {
  const InstanceFile f = load_instance(CEO_DATA_DIR "/gap_demo.json");
  EXPECT_EQ(f.AsAligned().kx()(0, 0), 1.0);
  EXPECT_EQ(f.Target().d()(0, 0), 0.75);
  EXPECT_EQ(ReadFile(CEO_DATA_DIR "/gap_demo.json").find("\"model\""), 4u);
}

}  // namespace
}  // namespace ceo
