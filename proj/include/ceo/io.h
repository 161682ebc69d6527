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

// Instance files (JSON) and report serialization. The schema is documented
// in docs/instance_format.md.

#ifndef CEO_IO_H_
#define CEO_IO_H_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ceo/bounds.h"
#include "ceo/closed_forms.h"
#include "ceo/model.h"
#include "ceo/optimize.h"
#include "ceo/verify.h"

namespace ceo {

enum class ModelKind { kAligned, kGeneral, kScalar, kParallel };

std::string_view ModelKindName(ModelKind kind);

struct InstanceFile {
  ModelKind model = ModelKind::kAligned;
  std::optional<CeoInstance> aligned;
  std::optional<GeneralCeoInstance> general;
  std::optional<ScalarCeoInstance> scalar;
  std::optional<ParallelCeoInstance> parallel;
  // Distortion: full matrix for aligned/general, scalar d for the scalar
  // model; parallel targets live in `parallel`.
  std::optional<SymMatrix> distortion;
  double scalar_distortion = 0.0;
  std::optional<std::vector<double>> mu;

  int num_sensors() const;
  // Aligned view: scalar and parallel models embed as 1x1 / diagonal.
  // Throws kInvalidArgument for the general model.
  CeoInstance AsAligned() const;
  // General view: aligned models go through align_to_general.
  GeneralCeoInstance AsGeneral() const;
  DistortionTarget Target() const;

  bool operator==(const InstanceFile& o) const;
};

// Throws kParseError on malformed JSON or schema violations, and the model's
// own validation errors (kInvalidInstance, kNotPositiveDefinite, ...) on
// well-formed but invalid content.
InstanceFile parse_instance(const std::string& text);
InstanceFile load_instance(const std::string& path);

// Normalized form: symmetric matrices written exactly as stored, fixed key
// order. parse_instance(dump_instance(f)) == f.
std::string dump_instance(const InstanceFile& file);

// Infinite values serialize as the strings "inf" / "-inf".
nlohmann::json number_json(double v);
nlohmann::json matrix_json(const Eigen::MatrixXd& m);

// Rates are multiplied by `unit_scale` (1 for nats, 1/ln 2 for bits).
nlohmann::json report_json(const BoundReport& r, int num_sensors, double unit_scale);
nlohmann::json assumptions_json(const AssumptionReport& r);
nlohmann::json demo_json(const DemoReport& r);
nlohmann::json validation_json(const DistortionValidation& v);

// 17 significant digits, '.' decimal separator, "inf" for infinities.
std::string format_csv_number(double v);
// RFC 4180 CSV: header mu1..muL,value then one row per trace entry.
std::string trace_csv(const std::vector<TraceRow>& rows, double unit_scale);

}  // namespace ceo

#endif  // CEO_IO_H_
