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
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace ceo {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kAligned: return "aligned";
    case ModelKind::kGeneral: return "general";
    case ModelKind::kScalar: return "scalar";
    case ModelKind::kParallel: return "parallel";
  }
  return "unknown";
}

namespace {

[[noreturn]] void Fail(const std::string& what) {
  throw CeoError(ErrorCode::kParseError, what);
}

const json& Field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) Fail(std::string("missing field \"") + key + "\"");
  return *it;
}

double Number(const json& j, const std::string& where) {
  if (!j.is_number()) Fail(where + ": expected a number");
  return j.get<double>();
}

std::vector<double> NumberList(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) Fail(where + ": expected a non-empty array of numbers");
  std::vector<double> out;
  for (size_t i = 0; i < j.size(); ++i) {
    out.push_back(Number(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Eigen::MatrixXd Matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) Fail(where + ": expected an array of rows");
  const size_t rows = j.size();
  size_t cols = 0;
  for (size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].empty()) Fail(where + ": every row must be a non-empty array");
    if (i == 0) cols = j[i].size();
    if (j[i].size() != cols) Fail(where + ": ragged rows");
  }
  Eigen::MatrixXd m(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    for (size_t k = 0; k < cols; ++k) {
      m(i, k) = Number(j[i][k], where + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
  }
  return m;
}

void RejectUnknown(const json& j, const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) Fail("unknown field \"" + it.key() + "\"");
  }
}

ordered_json MatrixOut(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

int InstanceFile::num_sensors() const {
  switch (model) {
    case ModelKind::kAligned: return aligned->num_sensors();
    case ModelKind::kGeneral: return general->num_sensors();
    case ModelKind::kScalar: return scalar->num_sensors();
    case ModelKind::kParallel: return parallel->num_sensors();
  }
  return 0;
}

CeoInstance InstanceFile::AsAligned() const {
  switch (model) {
    case ModelKind::kAligned: return *aligned;
    case ModelKind::kScalar: return scalar->ToMatrix();
    case ModelKind::kParallel: return parallel->ToMatrix();
    case ModelKind::kGeneral: break;
  }
  throw CeoError(ErrorCode::kInvalidArgument,
                 "general-channel instances have no aligned form");
}

GeneralCeoInstance InstanceFile::AsGeneral() const {
  if (model == ModelKind::kGeneral) return *general;
  return align_to_general(AsAligned());
}

DistortionTarget InstanceFile::Target() const {
  switch (model) {
    case ModelKind::kAligned:
    case ModelKind::kGeneral: return DistortionTarget(*distortion);
    case ModelKind::kScalar: return DistortionTarget(SymMatrix::Scalar(scalar_distortion));
    case ModelKind::kParallel: return parallel->TargetMatrix();
  }
  throw CeoError(ErrorCode::kInvalidArgument, "unknown model");
}

bool InstanceFile::operator==(const InstanceFile& o) const {
  return model == o.model && aligned == o.aligned && general == o.general &&
         scalar == o.scalar && parallel == o.parallel && distortion == o.distortion &&
         scalar_distortion == o.scalar_distortion && mu == o.mu;
}

InstanceFile parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    Fail(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) Fail("top level must be an object");
  const json& model = Field(j, "model");
  if (!model.is_string()) Fail("\"model\" must be a string");
  const std::string name = model.get<std::string>();

  InstanceFile f;
  if (j.contains("mu")) f.mu = NumberList(j["mu"], "mu");

  if (name == "aligned" || name == "general") {
    const bool aligned = name == "aligned";
    f.model = aligned ? ModelKind::kAligned : ModelKind::kGeneral;
    RejectUnknown(j, {"model", "kx", "sensors", "distortion", "mu"});
    SymMatrix kx(Matrix(Field(j, "kx"), "kx"));
    const json& sensors = Field(j, "sensors");
    if (!sensors.is_array() || sensors.empty()) Fail("\"sensors\" must be a non-empty array");
    std::vector<SymMatrix> noises;
    std::vector<GenMatrix> channels;
    const char* key = aligned ? "sigma" : "h";
    for (size_t l = 0; l < sensors.size(); ++l) {
      const std::string where = "sensors[" + std::to_string(l) + "]";
      if (!sensors[l].is_object()) Fail(where + ": expected an object");
      RejectUnknown(sensors[l], {key});
      const Eigen::MatrixXd m = Matrix(Field(sensors[l], key), where + "." + key);
      if (aligned) {
        noises.emplace_back(m);
      } else {
        channels.push_back(m);
      }
    }
    const json& dist = Field(j, "distortion");
    if (dist.is_number()) {
      f.distortion = SymMatrix::Identity(kx.dim()) * Number(dist, "distortion");
    } else {
      f.distortion = SymMatrix(Matrix(dist, "distortion"));
    }
    if (aligned) {
      f.aligned.emplace(std::move(kx), std::move(noises));
    } else {
      f.general.emplace(std::move(kx), std::move(channels));
    }
    DistortionTarget check(*f.distortion);
    require_same_dim(check.d(), aligned ? f.aligned->kx() : f.general->kx(), "distortion");
  } else if (name == "scalar") {
    f.model = ModelKind::kScalar;
    RejectUnknown(j, {"model", "var_x", "noise_vars", "distortion", "mu"});
    ScalarCeoInstance s;
    s.var_x = Number(Field(j, "var_x"), "var_x");
    s.noise_vars = NumberList(Field(j, "noise_vars"), "noise_vars");
    s.Validate();
    f.scalar = s;
    f.scalar_distortion = Number(Field(j, "distortion"), "distortion");
    DistortionTarget check(SymMatrix::Scalar(f.scalar_distortion));
  } else if (name == "parallel") {
    f.model = ModelKind::kParallel;
    RejectUnknown(j, {"model", "source_vars", "noise_vars", "distortion", "mu"});
    ParallelCeoInstance p;
    p.source_vars = NumberList(Field(j, "source_vars"), "source_vars");
    const json& noise = Field(j, "noise_vars");
    if (!noise.is_array() || noise.empty()) Fail("\"noise_vars\" must be an L x M array");
    for (size_t l = 0; l < noise.size(); ++l) {
      p.noise_vars.push_back(NumberList(noise[l], "noise_vars[" + std::to_string(l) + "]"));
    }
    p.targets = NumberList(Field(j, "distortion"), "distortion");
    p.Validate();
    f.parallel = p;
  } else {
    Fail("unknown model \"" + name + "\"");
  }
  if (f.mu && static_cast<int>(f.mu->size()) != f.num_sensors()) {
    throw CeoError(ErrorCode::kWrongSensorCount, "mu has the wrong length");
  }
  return f;
}

InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string dump_instance(const InstanceFile& f) {
  ordered_json j;
  j["model"] = std::string(ModelKindName(f.model));
  switch (f.model) {
    case ModelKind::kAligned:
    case ModelKind::kGeneral: {
      const bool aligned = f.model == ModelKind::kAligned;
      j["kx"] = MatrixOut(aligned ? f.aligned->kx().matrix() : f.general->kx().matrix());
      ordered_json sensors = ordered_json::array();
      const int n = f.num_sensors();
      for (int l = 0; l < n; ++l) {
        ordered_json s;
        if (aligned) {
          s["sigma"] = MatrixOut(f.aligned->noise(l).matrix());
        } else {
          s["h"] = MatrixOut(f.general->channel(l));
        }
        sensors.push_back(s);
      }
      j["sensors"] = sensors;
      j["distortion"] = MatrixOut(f.distortion->matrix());
      break;
    }
    case ModelKind::kScalar:
      j["var_x"] = f.scalar->var_x;
      j["noise_vars"] = f.scalar->noise_vars;
      j["distortion"] = f.scalar_distortion;
      break;
    case ModelKind::kParallel:
      j["source_vars"] = f.parallel->source_vars;
      j["noise_vars"] = f.parallel->noise_vars;
      j["distortion"] = f.parallel->targets;
      break;
  }
  if (f.mu) j["mu"] = *f.mu;
  return j.dump(2) + "\n";
}

json number_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(number_json(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

json report_json(const BoundReport& r, int num_sensors, double unit_scale) {
  json j;
  j["kind"] = std::string(TangentKindName(r.kind));
  j["value"] = number_json(r.value * unit_scale);
  j["feasible"] = r.feasibility.ok;
  j["max_violation"] = number_json(r.feasibility.max_violation);
  j["frame"] = r.allocation.frame == Frame::kAligned ? "aligned" : "general";
  json alloc = json::array();
  for (const auto& m : r.allocation.mats) alloc.push_back(matrix_json(m.matrix()));
  j["allocation"] = alloc;
  json subsets = json::object();
  for (const auto& [bits, v] : r.per_subset) {
    if (bits == 0) continue;
    subsets[SubsetId(bits).ToString(num_sensors)] = number_json(v * unit_scale);
  }
  j["per_subset"] = subsets;
  if (!r.vertex.empty()) {
    json vertex = json::array();
    for (double v : r.vertex) vertex.push_back(number_json(v * unit_scale));
    j["vertex"] = vertex;
  }
  return j;
}

json assumptions_json(const AssumptionReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"inequality", c.name},
                      {"lhs", number_json(c.lhs)},
                      {"rhs", number_json(c.rhs)},
                      {"margin", number_json(c.margin)},
                      {"holds", c.holds}});
  }
  return {{"swapped", r.swapped}, {"all_hold", r.all_hold()}, {"checks", checks}};
}

json demo_json(const DemoReport& r) {
  json limits = json::array();
  for (const auto& c : r.limits) {
    limits.push_back({{"constraint", c.name}, {"margin", number_json(c.margin)},
                      {"holds", c.holds}});
  }
  json quantities = json::object();
  for (const auto& [k, v] : r.quantities) quantities[k] = number_json(v);
  json cross = json::array();
  for (const auto& c : r.cross_checks) {
    cross.push_back({{"check", c.name},
                     {"a", number_json(c.lhs)},
                     {"b", number_json(c.rhs)},
                     {"difference", number_json(std::abs(c.lhs - c.rhs))},
                     {"agree", c.holds}});
  }
  return {{"demo", r.name},
          {"limits", limits},
          {"assumptions", assumptions_json(r.assumptions)},
          {"quantities", quantities},
          {"cross_checks", cross},
          {"notes", r.notes},
          {"conclusion", r.conclusion ? "pass" : "fail"}};
}

json validation_json(const DistortionValidation& v) {
  return {{"ok", v.ok()},
          {"lower_ok", v.lower_ok},
          {"upper_ok", v.upper_ok},
          {"upper_checked", v.upper_checked},
          {"lower_margin", number_json(v.lower_margin)},
          {"upper_margin", number_json(v.upper_margin)},
          {"diagnosis", v.Describe()}};
}

std::string format_csv_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trace_csv(const std::vector<TraceRow>& rows, double unit_scale) {
  std::ostringstream os;
  const size_t n = rows.empty() ? 0 : rows.front().mu.size();
  for (size_t l = 0; l < n; ++l) os << "mu" << l + 1 << ",";
  os << "value\r\n";
  for (const auto& row : rows) {
    for (double m : row.mu) os << format_csv_number(m) << ",";
    os << format_csv_number(row.report.value * unit_scale) << "\r\n";
  }
  return os.str();
}

}  // namespace ceo
