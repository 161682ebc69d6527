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

#include "ceo/verify.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

namespace ceo {

namespace {

constexpr double kOptimizerTol = 1e-6;
constexpr double kGridTol = 1e-5;
constexpr double kPropertyTol = 1e-9;
constexpr double kDominanceTol = 1e-12;

InequalityCheck Agreement(std::string name, double a, double b, double tol) {
  InequalityCheck c;
  c.name = std::move(name);
  c.lhs = a;
  c.rhs = b;
  c.margin = tol - std::abs(a - b);
  c.holds = std::abs(a - b) <= tol;
  return c;
}

bool AllHold(const std::vector<InequalityCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const InequalityCheck& c) { return c.holds; });
}

void AddLimits(DemoReport* r, const DistortionValidation& v, const std::string& suffix) {
  InequalityCheck lo;
  lo.name = "collective MMSE <= D" + suffix;
  lo.margin = v.lower_margin;
  lo.holds = v.lower_ok;
  InequalityCheck hi;
  hi.name = "D <= K_X" + suffix;
  hi.margin = v.upper_margin;
  hi.holds = v.upper_ok;
  r->limits.push_back(lo);
  r->limits.push_back(hi);
}

// Largest t in [0, 1] such that t * E (whitened) is feasible.
double MaxFeasibleScale(const CeoInstance& inst, const DistortionTarget& target,
                        const Allocation& white) {
  auto feasible = [&](double t) {
    Allocation a;
    for (const auto& m : white.mats) a.mats.push_back(m * t);
    const SymMatrix p = effective_precision(inst, unwhiten_allocation(inst, a),
                                            SubsetId::Full(inst.num_sensors()));
    return (target.d() - inverse(p)).MinEigenvalue() >= 0.0;
  };
  if (feasible(1.0)) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

double DemoReport::Quantity(const std::string& key) const {
  for (const auto& [k, v] : quantities) {
    if (k == key) return v;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

DemoReport demo_gap(double scale, double mu_ratio, double d, const OptimizerOptions& opts) {
  if (!(scale > 0.0) || !(mu_ratio > 0.0) || !(d > 0.0)) {
    throw CeoError(ErrorCode::kInvalidArgument, "scale, mu_ratio and d must be positive");
  }
  DemoReport r;
  r.name = "gap";
  const SymMatrix s = SymMatrix::Scalar(scale);
  const CeoInstance inst(s, {s, s});
  const DistortionTarget target(SymMatrix::Scalar(d * scale));
  const WeightVector mu({mu_ratio, 1.0});

  AddLimits(&r, validate_distortion(inst, target), "");
  r.assumptions = check_gap_assumptions(inst, target, mu);
  if (!AllHold(r.limits)) r.notes.push_back("distortion outside its admissible limits");
  if (!r.assumptions.all_hold()) r.notes.push_back(r.assumptions.Describe());
  if (!r.notes.empty()) {
    r.notes.push_back("no conclusion claimed");
    return r;
  }

  const double tplus = corollary3_tplus(inst, target, mu);
  const double tplus_witness =
      outer_tangent_value(inst, corollary3_witness(inst, target, mu), target, mu);
  const double tplus_opt = minimize_tangent(TangentKind::kOuter, inst, target, mu, opts).value;
  const double tminus_upper = corollary4_tminus_upper(inst, target, mu);
  const double tminus_witness =
      chen_wang_tangent_value(inst, corollary4_witness(inst, target, mu), target, mu);
  const double gap = tplus - tminus_upper;

  r.quantities = {{"tplus", tplus},
                  {"tplus_witness", tplus_witness},
                  {"tplus_optimizer", tplus_opt},
                  {"tminus_upper", tminus_upper},
                  {"tminus_upper_witness", tminus_witness},
                  {"gap", gap}};
  r.cross_checks.push_back(Agreement("tplus closed form vs witness", tplus, tplus_witness,
                                     kWitnessTol));
  r.cross_checks.push_back(Agreement("tplus closed form vs optimizer", tplus, tplus_opt,
                                     kOptimizerTol));
  r.cross_checks.push_back(Agreement("tminus upper closed form vs witness", tminus_upper,
                                     tminus_witness, kWitnessTol));
  if (!AllHold(r.cross_checks)) r.notes.push_back("cross-check disagreement");
  r.conclusion = AllHold(r.cross_checks) && gap > 0.0;
  return r;
}

DemoReport demo_parallel(double sigma, double d1_frac, double d2_frac, double mu_ratio,
                         const GridOptions& gopts) {
  if (!(sigma > 0.0) || !(mu_ratio > 0.0) || !(d1_frac > 0.0) || !(d2_frac > 0.0)) {
    throw CeoError(ErrorCode::kInvalidArgument, "parameters must be positive");
  }
  DemoReport r;
  r.name = "parallel";
  const double v = sigma * sigma;
  ParallelCeoInstance inst;
  inst.source_vars = {v, v};
  inst.noise_vars = {{v, v}, {v, v}};
  inst.targets = {d1_frac * v, d2_frac * v};
  const WeightVector mu({mu_ratio, 1.0});

  for (int m = 0; m < 2; ++m) {
    const ScalarCeoInstance comp = inst.Component(m);
    const DistortionTarget t(SymMatrix::Scalar(inst.targets[m]));
    AddLimits(&r, validate_distortion(comp.ToMatrix(), t), " (component " +
                                                               std::to_string(m + 1) + ")");
  }
  if (!AllHold(r.limits)) {
    r.notes.push_back("distortion outside its admissible limits");
    r.notes.push_back("no conclusion claimed");
    return r;
  }
  r.assumptions = check_parallel_assumptions(inst, mu);
  if (!r.assumptions.all_hold()) {
    r.notes.push_back(r.assumptions.Describe());
    r.notes.push_back("no conclusion claimed");
    return r;
  }

  const ParallelClosedForm tp = corollary5_parallel_tp(inst, mu);
  const ParallelClosedForm up = corollary6_tplus_upper(inst, mu);

  // T^p at its witness: the exact region is separable, so the tangent value
  // is the sum of per-component scalar tangents.
  double tp_witness = 0.0, tp_grid = 0.0;
  for (int m = 0; m < 2; ++m) {
    const CeoInstance comp = inst.Component(m).ToMatrix();
    const DistortionTarget t(SymMatrix::Scalar(inst.targets[m]));
    Allocation a;
    for (int l = 0; l < 2; ++l) a.mats.push_back(SymMatrix::Scalar(tp.witness[l][m]));
    tp_witness += outer_tangent_value(comp, a, t, mu);
    tp_grid += grid_oracle(TangentKind::kOuter, comp, t, mu, gopts).value;
  }
  const CeoInstance vec = inst.ToMatrix();
  const DistortionTarget vec_target = inst.TargetMatrix();
  auto diag_alloc = [](const ParallelAllocation& w) {
    Allocation a;
    for (const auto& row : w) a.mats.push_back(SymMatrix::Diagonal(row));
    return a;
  };
  const double tp_vector = outer_tangent_value(vec, diag_alloc(tp.witness), vec_target, mu);
  const double up_witness = outer_tangent_value(vec, diag_alloc(up.witness), vec_target, mu);
  const double gap = tp.value - up.value;

  r.quantities = {{"f1_min", tp.f1_min},
                  {"d11", tp.d11},
                  {"d21", tp.d21},
                  {"tp", tp.value},
                  {"tp_witness", tp_witness},
                  {"tp_vector_witness", tp_vector},
                  {"tp_grid", tp_grid},
                  {"tplus_upper", up.value},
                  {"tplus_upper_witness", up_witness},
                  {"gap", gap}};
  r.cross_checks.push_back(
      Agreement("tp closed form vs component witness", tp.value, tp_witness, kWitnessTol));
  r.cross_checks.push_back(
      Agreement("tp closed form vs vector witness", tp.value, tp_vector, kWitnessTol));
  r.cross_checks.push_back(
      Agreement("tp closed form vs per-component grid", tp.value, tp_grid, kGridTol));
  r.cross_checks.push_back(Agreement("tplus upper closed form vs witness", up.value,
                                     up_witness, kWitnessTol));
  if (!AllHold(r.cross_checks)) r.notes.push_back("cross-check disagreement");
  r.conclusion = AllHold(r.cross_checks) && gap > 0.0;
  return r;
}

SupermodularityReport check_supermodularity(const CeoInstance& inst,
                                            const DistortionTarget& target,
                                            const Allocation& alloc, int max_l) {
  const int n = inst.num_sensors();
  if (max_l > 4 || n > max_l) {
    throw CeoError(ErrorCode::kInvalidArgument,
                   "exhaustive check supports at most 4 sensors");
  }
  const uint32_t count = 1u << n;
  std::vector<double> f(count);
  for (uint32_t a = 0; a < count; ++a) f[a] = set_function(inst, alloc, target, SubsetId(a));
  SupermodularityReport r;
  r.worst = -std::abs(f[0]);
  r.checked = 1;
  for (uint32_t a = 0; a < count; ++a) {
    for (int t = 0; t < n; ++t) {
      if ((a >> t) & 1u) continue;
      r.worst = std::min(r.worst, f[a | (1u << t)] - f[a]);
      ++r.checked;
    }
    for (uint32_t b = 0; b < count; ++b) {
      r.worst = std::min(r.worst, f[a | b] + f[a & b] - f[a] - f[b]);
      ++r.checked;
    }
  }
  r.ok = r.worst >= -kPropertyTol;
  return r;
}

DominanceReport check_dominance(const CeoInstance& inst, const DistortionTarget& target,
                                int trials, uint64_t seed) {
  Rng rng(seed);
  const int n = inst.num_sensors();
  DominanceReport r;
  r.worst_subset = std::numeric_limits<double>::infinity();
  r.worst_tangent = std::numeric_limits<double>::infinity();
  for (int i = 0; i < trials; ++i) {
    const Allocation alloc = random_feasible_allocation(inst, target, rng);
    const WeightVector mu = random_weights(n, rng);
    for (uint32_t bits = 1; bits <= SubsetId::Full(n).bits(); ++bits) {
      const double outer = outer_subset_bound(inst, alloc, target, SubsetId(bits));
      const double inner = inner_subset_bound(inst, alloc, SubsetId(bits));
      r.worst_subset = std::min({r.worst_subset, inner - outer, outer});
    }
    const double outer = outer_tangent_value(inst, alloc, target, mu);
    const double inner = inner_tangent_value(inst, alloc, target, mu);
    r.worst_tangent = std::min(r.worst_tangent, inner - outer);
    if (n == 2) {
      const double cw = chen_wang_tangent_value(inst, alloc, target, mu);
      r.worst_tangent = std::min(r.worst_tangent, outer - cw);
    }
    ++r.trials;
  }
  r.ok = r.worst_subset >= -kDominanceTol && r.worst_tangent >= -kDominanceTol;
  return r;
}

EnhancementReport enhancement_probe(const GeneralCeoInstance& inst,
                                    const Allocation& alloc, SubsetId subset,
                                    const std::vector<double>& alphas) {
  for (size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0) || (i > 0 && !(alphas[i] < alphas[i - 1]))) {
      throw CeoError(ErrorCode::kInvalidArgument,
                     "alphas must be positive and strictly decreasing");
    }
  }
  const int n = inst.num_sensors();
  const SubsetId rest = subset.Complement(n);
  const SymMatrix base = inverse(general_effective_precision(inst, alloc, rest));

  std::vector<Eigen::JacobiSVD<Eigen::MatrixXd>> svd;
  for (int l = 0; l < n; ++l) {
    svd.emplace_back(inst.channel(l), Eigen::ComputeFullU | Eigen::ComputeFullV);
  }
  EnhancementReport r;
  r.alphas = alphas;
  for (double alpha : alphas) {
    Eigen::MatrixXd p = inst.kx_inv().matrix();
    for (int l = 0; l < n; ++l) {
      if (!rest.contains(l)) continue;
      const Eigen::MatrixXd& h = inst.channel(l);
      Eigen::MatrixXd lambda = Eigen::MatrixXd::Zero(h.rows(), h.cols());
      const Eigen::VectorXd& sv = svd[l].singularValues();
      for (int i = 0; i < sv.size(); ++i) lambda(i, i) = sv(i) + alpha;
      const Eigen::MatrixXd ha = svd[l].matrixU() * lambda * svd[l].matrixV().transpose();
      const int rows = inst.rows(l);
      p += ha.transpose() * (Eigen::MatrixXd::Identity(rows, rows) - alloc[l].matrix()) * ha;
    }
    const SymMatrix enhanced = inverse(SymMatrix::SymmetricPart(p));
    r.distances.push_back((enhanced - base).SpectralNorm());
  }
  r.monotone = true;
  for (size_t i = 1; i < r.distances.size(); ++i) {
    r.monotone = r.monotone && r.distances[i] < r.distances[i - 1];
  }
  r.converged = !r.distances.empty() && r.distances.back() < 1e-6;
  return r;
}

// -- Samplers -----------------------------------------------------------------

SymMatrix random_pd(int dim, Rng& rng, double min_eig, double max_eig) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> eig(min_eig, max_eig);
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = eig(rng);
  return SymMatrix::SymmetricPart(q * v.asDiagonal() * q.transpose());
}

CeoInstance random_instance(int num_sensors, int dim, Rng& rng) {
  SymMatrix kx = random_pd(dim, rng);
  std::vector<SymMatrix> noises;
  for (int l = 0; l < num_sensors; ++l) noises.push_back(random_pd(dim, rng));
  return CeoInstance(std::move(kx), std::move(noises));
}

DistortionTarget random_target(const CeoInstance& inst, Rng& rng) {
  std::uniform_real_distribution<double> theta(0.1, 0.9);
  const SymMatrix mmse = collective_mmse(inst);
  return DistortionTarget(mmse + (inst.kx() - mmse) * theta(rng));
}

Allocation random_feasible_allocation(const CeoInstance& inst,
                                      const DistortionTarget& target, Rng& rng) {
  std::uniform_real_distribution<double> shrink(0.3, 1.0);
  Allocation white;
  white.frame = Frame::kGeneral;
  for (int l = 0; l < inst.num_sensors(); ++l) {
    white.mats.push_back(random_pd(inst.dim(), rng, 0.0, 1.0));
  }
  const double t = MaxFeasibleScale(inst, target, white) * shrink(rng);
  for (auto& m : white.mats) m = m * t;
  return unwhiten_allocation(inst, white);
}

WeightVector random_weights(int num_sensors, Rng& rng) {
  std::uniform_real_distribution<double> w(0.05, 1.0);
  std::vector<double> mu(num_sensors);
  for (auto& v : mu) v = w(rng);
  return WeightVector(std::move(mu));
}

}  // namespace ceo
