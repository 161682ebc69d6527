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

// ceo_region: bound values, region traces, demos and property suites.
//
// Exit codes: 0 ok, 1 parse or usage error, 2 invalid instance or
// distortion target, 3 infeasible, 4 demo or suite failure.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ceo/io.h"

namespace {

using ceo::CeoError;
using ceo::ErrorCode;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitFailed = 4;

// Carries an exit code out of a command together with its stderr message.
struct ExitError {
  int code;
  std::string message;
};

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError: return kExitParse;
    case ErrorCode::kInfeasible: return kExitInfeasible;
    default: return kExitInvalid;
  }
}

std::vector<double> ParseList(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ExitError{kExitParse, "cannot parse number \"" + item + "\" in --mu"};
    }
  }
  return out;
}

struct Sweep {
  double from = 0.1;
  double to = 10.0;
  int steps = 10;
};

Sweep ParseSweep(const std::string& text) {
  Sweep s;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> s.from >> c1 >> s.to >> c2 >> s.steps) || c1 != ':' || c2 != ':' ||
      !in.eof() || s.steps < 1 || !(s.from >= 0.0) || !(s.to >= 0.0)) {
    throw ExitError{kExitParse, "--mu-sweep expects from:to:steps with steps >= 1"};
  }
  return s;
}

double UnitScale(const std::string& units) {
  return units == "bits" ? 1.0 / std::numbers::ln2 : 1.0;
}

ceo::TangentKind AlignedKind(const std::string& kind) {
  if (kind == "outer") return ceo::TangentKind::kOuter;
  if (kind == "inner") return ceo::TangentKind::kInner;
  return ceo::TangentKind::kChenWang;
}

bool IsGeneralKind(const std::string& kind) { return kind.rfind("general-", 0) == 0; }

// Checks the distortion limits; on failure prints the diagnosis to stderr.
void RequireValidTarget(const ceo::InstanceFile& file, const std::string& kind,
                        bool check_upper) {
  const ceo::DistortionTarget target = file.Target();
  const ceo::DistortionValidation v =
      file.model == ceo::ModelKind::kGeneral
          ? ceo::validate_general_distortion(*file.general, target, check_upper)
          : ceo::validate_distortion(file.AsAligned(), target, check_upper);
  if (!v.ok()) {
    std::cerr << ceo::validation_json(v).dump(2) << "\n";
    throw ExitError{kExitInvalid, "distortion target outside the achievable range"};
  }
  if (file.model == ceo::ModelKind::kGeneral && !IsGeneralKind(kind)) {
    throw ExitError{kExitInvalid, "general-channel instances need --kind general-outer "
                                  "or general-inner"};
  }
  if (kind == "chen-wang" && file.num_sensors() != 2) {
    throw ExitError{kExitInvalid, "--kind chen-wang needs exactly two sensors"};
  }
}

ceo::WeightVector ResolveWeights(const ceo::InstanceFile& file, const std::string& flag) {
  std::vector<double> mu;
  if (!flag.empty()) {
    mu = ParseList(flag);
  } else if (file.mu) {
    mu = *file.mu;
  } else {
    throw ExitError{kExitParse, "no weights: pass --mu or add \"mu\" to the instance"};
  }
  if (static_cast<int>(mu.size()) != file.num_sensors()) {
    throw ExitError{kExitInvalid, "--mu has " + std::to_string(mu.size()) +
                                      " entries for " +
                                      std::to_string(file.num_sensors()) + " sensors"};
  }
  return ceo::WeightVector(mu);
}

ceo::BoundReport Minimize(const ceo::InstanceFile& file, const std::string& kind,
                          const ceo::WeightVector& mu, const ceo::OptimizerOptions& opts) {
  if (IsGeneralKind(kind)) {
    const ceo::TangentKind k =
        kind == "general-outer" ? ceo::TangentKind::kOuter : ceo::TangentKind::kInner;
    return ceo::minimize_tangent(k, file.AsGeneral(), file.Target(), mu, opts);
  }
  return ceo::minimize_tangent(AlignedKind(kind), file.AsAligned(), file.Target(), mu,
                               opts);
}

struct Common {
  std::string input;
  std::string kind = "outer";
  std::string mu;
  std::string units = "nats";
  uint64_t seed = 42;
  bool skip_upper = false;
};

void AddCommon(CLI::App* cmd, Common* c) {
  cmd->add_option("input", c->input, "instance JSON file")->required();
  cmd->add_option("--kind", c->kind, "bound to evaluate")
      ->check(CLI::IsMember(
          {"outer", "inner", "chen-wang", "general-outer", "general-inner"}));
  cmd->add_option("--units", c->units, "rate units")->check(CLI::IsMember({"nats", "bits"}));
  cmd->add_option("--seed", c->seed, "optimizer seed");
  cmd->add_flag("--skip-upper-check", c->skip_upper, "do not require D <= K_X");
}

int RunBound(const Common& c, bool dump) {
  const ceo::InstanceFile file = ceo::load_instance(c.input);
  if (dump) {
    std::cout << ceo::dump_instance(file);
    return kExitOk;
  }
  RequireValidTarget(file, c.kind, !c.skip_upper);
  const ceo::WeightVector mu = ResolveWeights(file, c.mu);
  ceo::OptimizerOptions opts;
  opts.seed = c.seed;
  const ceo::BoundReport r = Minimize(file, c.kind, mu, opts);
  const double scale = UnitScale(c.units);
  json out = ceo::report_json(r, file.num_sensors(), scale);
  out["kind"] = c.kind;
  out["model"] = std::string(ceo::ModelKindName(file.model));
  out["units"] = c.units;
  out["mu"] = mu.values();
  out["seed"] = c.seed;
  if (file.model == ceo::ModelKind::kScalar && c.kind != "chen-wang") {
    // Inner and outer regions coincide for the scalar model.
    const ceo::BoundReport exact =
        ceo::scalar_solve(*file.scalar, file.scalar_distortion, mu);
    out["exact_region_value"] = ceo::number_json(exact.value * scale);
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int RunTrace(const Common& c, const std::string& sweep_text, const std::string& out_path) {
  const ceo::InstanceFile file = ceo::load_instance(c.input);
  RequireValidTarget(file, c.kind, !c.skip_upper);
  if (file.num_sensors() < 2) throw ExitError{kExitInvalid, "trace needs two or more sensors"};
  const Sweep sweep = ParseSweep(sweep_text);
  std::vector<ceo::WeightVector> mus;
  for (int i = 0; i < sweep.steps; ++i) {
    std::vector<double> mu(file.num_sensors(), 1.0);
    mu[1] = sweep.steps == 1
                ? sweep.from
                : sweep.from + (sweep.to - sweep.from) * i / (sweep.steps - 1);
    mus.emplace_back(mu);
  }
  ceo::OptimizerOptions opts;
  opts.seed = c.seed;
  std::vector<ceo::TraceRow> rows;
  if (IsGeneralKind(c.kind)) {
    const ceo::TangentKind k =
        c.kind == "general-outer" ? ceo::TangentKind::kOuter : ceo::TangentKind::kInner;
    rows = ceo::trace_region(k, file.AsGeneral(), file.Target(), mus, opts);
  } else {
    rows = ceo::trace_region(AlignedKind(c.kind), file.AsAligned(), file.Target(), mus, opts);
  }
  const std::string csv = ceo::trace_csv(rows, UnitScale(c.units));
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    out << csv;
    if (!out) throw ExitError{kExitParse, "cannot write " + out_path};
  }
  return kExitOk;
}

struct DemoArgs {
  std::string which;
  double scale = 1.0;
  double mu_ratio = 4.0;
  double d = 0.75;
  double sigma = 1.0;
  double d1_frac = 0.4;
  double d2_frac = 0.8;
  uint64_t seed = 42;
};

int RunDemo(const DemoArgs& a) {
  ceo::DemoReport r;
  if (a.which == "gap") {
    ceo::OptimizerOptions opts;
    opts.seed = a.seed;
    r = ceo::demo_gap(a.scale, a.mu_ratio, a.d, opts);
  } else {
    r = ceo::demo_parallel(a.sigma, a.d1_frac, a.d2_frac, a.mu_ratio);
  }
  std::cout << ceo::demo_json(r).dump(2) << "\n";
  if (r.conclusion) return kExitOk;
  for (const auto& c : r.limits) {
    if (!c.holds) std::cerr << "limit violated: " << c.name << " (margin " << c.margin << ")\n";
  }
  for (const auto& n : r.notes) std::cerr << n << "\n";
  return kExitFailed;
}

struct VerifyArgs {
  std::string input;
  std::string suite;
  int trials = 100;
  uint64_t seed = 42;
};

int RunVerify(const VerifyArgs& a) {
  const ceo::InstanceFile file = ceo::load_instance(a.input);
  if (a.trials < 1) throw ExitError{kExitParse, "--trials must be positive"};
  json out{{"suite", a.suite}, {"seed", a.seed}};
  bool pass = false;
  if (a.suite == "enhancement") {
    const ceo::GeneralCeoInstance inst = file.AsGeneral();
    ceo::Allocation alloc;
    alloc.frame = ceo::Frame::kGeneral;
    for (int l = 0; l < inst.num_sensors(); ++l) {
      alloc.mats.push_back(ceo::SymMatrix::Identity(inst.rows(l)) * 0.5);
    }
    const ceo::EnhancementReport r =
        ceo::enhancement_probe(inst, alloc, ceo::SubsetId(), {1e-2, 1e-4, 1e-6});
    json dist = json::array();
    for (double d : r.distances) dist.push_back(ceo::number_json(d));
    out["alphas"] = r.alphas;
    out["distances"] = dist;
    out["strictly_decreasing"] = r.monotone;
    out["converged"] = r.converged;
    pass = r.monotone && r.converged;
  } else {
    if (file.model == ceo::ModelKind::kGeneral) {
      throw ExitError{kExitInvalid, "the " + a.suite + " suite needs an aligned instance"};
    }
    const ceo::CeoInstance inst = file.AsAligned();
    const ceo::DistortionTarget target = file.Target();
    out["trials"] = a.trials;
    if (a.suite == "supermodularity") {
      ceo::Rng rng(a.seed);
      int violations = 0, checked = 0;
      double worst = 0.0;
      for (int t = 0; t < a.trials; ++t) {
        const ceo::Allocation alloc = ceo::random_feasible_allocation(inst, target, rng);
        const ceo::SupermodularityReport r = ceo::check_supermodularity(inst, target, alloc);
        violations += r.ok ? 0 : 1;
        checked += r.checked;
        worst = std::min(worst, r.worst);
      }
      out["inequalities_checked"] = checked;
      out["violations"] = violations;
      out["worst_slack"] = ceo::number_json(worst);
      pass = violations == 0;
    } else {
      const ceo::DominanceReport r = ceo::check_dominance(inst, target, a.trials, a.seed);
      out["worst_subset_slack"] = ceo::number_json(r.worst_subset);
      out["worst_tangent_slack"] = ceo::number_json(r.worst_tangent);
      out["violations"] = r.ok ? 0 : 1;
      pass = r.ok;
    }
  }
  out["pass"] = pass;
  std::cout << out.dump(2) << "\n";
  return pass ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian CEO rate-region bounds"};
  app.require_subcommand(1);

  Common bound_args;
  bool dump = false;
  auto* bound = app.add_subcommand("bound", "minimize a tangent objective");
  AddCommon(bound, &bound_args);
  bound->add_option("--mu", bound_args.mu, "comma-separated weights (overrides the file)");
  bound->add_flag("--dump-normalized", dump, "print the parsed instance and exit");

  Common trace_args;
  std::string sweep = "0.1:10:10";
  std::string out_path;
  auto* trace = app.add_subcommand("trace", "sweep mu2 with mu1 = 1 and write CSV");
  AddCommon(trace, &trace_args);
  trace->add_option("--mu-sweep", sweep, "from:to:steps");
  trace->add_option("--out", out_path, "CSV path (default stdout)");

  DemoArgs demo_args;
  auto* demo = app.add_subcommand("demo", "strict-separation demos");
  demo->add_option("which", demo_args.which)
      ->required()
      ->check(CLI::IsMember({"gap", "parallel"}));
  demo->add_option("--scale", demo_args.scale, "gap: K_X = Sigma_1 = Sigma_2");
  demo->add_option("--mu-ratio", demo_args.mu_ratio, "mu1 / mu2");
  demo->add_option("--d", demo_args.d, "gap: D / scale");
  demo->add_option("--sigma", demo_args.sigma, "parallel: common standard deviation");
  demo->add_option("--d1-frac", demo_args.d1_frac, "parallel: D_1 / sigma^2");
  demo->add_option("--d2-frac", demo_args.d2_frac, "parallel: D_2 / sigma^2");
  demo->add_option("--seed", demo_args.seed, "optimizer seed");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "structural property suites");
  verify->add_option("input", verify_args.input, "instance JSON file")->required();
  verify->add_option("--suite", verify_args.suite)
      ->required()
      ->check(CLI::IsMember({"supermodularity", "enhancement", "dominance"}));
  verify->add_option("--trials", verify_args.trials, "random trials");
  verify->add_option("--seed", verify_args.seed, "sampler seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (*bound) return RunBound(bound_args, dump);
    if (*trace) return RunTrace(trace_args, sweep, out_path);
    if (*demo) return RunDemo(demo_args);
    return RunVerify(verify_args);
  } catch (const ExitError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const CeoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}
