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

#include "ceo/closed_forms.h"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include <boost/math/tools/minima.hpp>

namespace ceo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Orientation {
  int hi = 0, lo = 1;  // sensor with the larger / smaller weight
  double mu1 = 0.0, mu2 = 0.0;
  bool swapped = false;
};

Orientation Orient(const WeightVector& mu) {
  if (mu.size() != 2) {
    throw CeoError(ErrorCode::kWrongSensorCount, "closed forms need exactly two sensors");
  }
  Orientation o;
  o.swapped = mu[0] < mu[1];
  o.hi = o.swapped ? 1 : 0;
  o.lo = 1 - o.hi;
  o.mu1 = mu[o.hi];
  o.mu2 = mu[o.lo];
  return o;
}

InequalityCheck MatrixCheck(std::string name, const SymMatrix& lhs, const SymMatrix& rhs) {
  InequalityCheck c;
  c.name = std::move(name);
  c.margin = (rhs - lhs).MinEigenvalue();
  c.holds = c.margin > kStrictMargin;
  c.lhs = lhs.dim() == 1 ? lhs(0, 0) : kNaN;
  c.rhs = rhs.dim() == 1 ? rhs(0, 0) : kNaN;
  return c;
}

InequalityCheck InfiniteLhs(std::string name, const SymMatrix& rhs) {
  InequalityCheck c;
  c.name = std::move(name);
  c.lhs = std::numeric_limits<double>::infinity();
  c.rhs = rhs.dim() == 1 ? rhs(0, 0) : kNaN;
  c.margin = -std::numeric_limits<double>::infinity();
  c.holds = false;
  return c;
}

InequalityCheck ScalarCheck(std::string name, double lhs, double rhs) {
  InequalityCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = rhs - lhs;
  c.holds = c.margin > kStrictMargin;
  return c;
}

void RequireAssumptions(const AssumptionReport& r) {
  if (!r.all_hold()) throw CeoError(ErrorCode::kAssumptionsViolated, r.Describe());
}

void RequireTwoSensorInstance(const CeoInstance& inst, const DistortionTarget& target) {
  if (inst.num_sensors() != 2) {
    throw CeoError(ErrorCode::kWrongSensorCount, "closed forms need exactly two sensors");
  }
  require_same_dim(inst.kx(), target.d(), "distortion target");
}

// K^{-1} + Sigma_2^{-1} with Sigma_2 the lower-weight sensor.
SymMatrix PrecisionWithSecond(const CeoInstance& inst, const Orientation& o) {
  return inst.kx_inv() + inst.noise_inv(o.lo);
}

double LogdetScaled(double c, const SymMatrix& a) {
  return a.dim() * std::log(c) + logdet(a);
}

}  // namespace

bool AssumptionReport::all_hold() const {
  for (const auto& c : checks) {
    if (!c.holds) return false;
  }
  return !checks.empty();
}

std::string AssumptionReport::Describe() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& c : checks) {
    if (c.holds) continue;
    if (!first) os << "; ";
    os << "assumption fails: " << c.name << " (margin " << c.margin << ")";
    first = false;
  }
  if (first) os << "all assumptions hold";
  return os.str();
}

AssumptionReport check_gap_assumptions(const CeoInstance& inst,
                                       const DistortionTarget& target,
                                       const WeightVector& mu) {
  RequireTwoSensorInstance(inst, target);
  const Orientation o = Orient(mu);
  const SymMatrix a = PrecisionWithSecond(inst, o);
  AssumptionReport r;
  r.swapped = o.swapped;
  r.checks.push_back(MatrixCheck("(mu2/mu1) Sigma_1^-1 < K_X^-1 + Sigma_2^-1 - D^-1",
                                 inst.noise_inv(o.hi) * (o.mu2 / o.mu1),
                                 a - target.d_inv()));
  const std::string second = "mu2/(mu1-mu2) K_X^-1 < Sigma_2^-1";
  const std::string third = "mu1/(mu1-mu2) D^-1 < K_X^-1 + Sigma_2^-1";
  if (o.mu1 > o.mu2) {
    const double gap = o.mu1 - o.mu2;
    r.checks.push_back(
        MatrixCheck(second, inst.kx_inv() * (o.mu2 / gap), inst.noise_inv(o.lo)));
    r.checks.push_back(MatrixCheck(third, target.d_inv() * (o.mu1 / gap), a));
  } else {
    r.checks.push_back(InfiniteLhs(second, inst.noise_inv(o.lo)));
    r.checks.push_back(InfiniteLhs(third, a));
  }
  return r;
}

double corollary3_tplus(const CeoInstance& inst, const DistortionTarget& target,
                        const WeightVector& mu) {
  RequireAssumptions(check_gap_assumptions(inst, target, mu));
  const Orientation o = Orient(mu);
  const SymMatrix a = PrecisionWithSecond(inst, o);
  return 0.5 * o.mu2 * (inst.logdet_kx() - target.logdet()) +
         0.5 * o.mu2 * (-inst.logdet_noise(o.lo) - logdet(a - target.d_inv()));
}

Allocation corollary3_witness(const CeoInstance& inst, const DistortionTarget& target,
                              const WeightVector& mu) {
  RequireAssumptions(check_gap_assumptions(inst, target, mu));
  const Orientation o = Orient(mu);
  const SymMatrix a = PrecisionWithSecond(inst, o);
  Allocation alloc;
  alloc.mats.resize(2);
  alloc.mats[o.hi] = inst.noise(o.hi);
  alloc.mats[o.lo] = (a - target.d_inv()).Congruence(inst.noise(o.lo).matrix());
  return alloc;
}

double corollary4_tminus_upper(const CeoInstance& inst, const DistortionTarget& target,
                               const WeightVector& mu) {
  const double tplus = corollary3_tplus(inst, target, mu);
  const Orientation o = Orient(mu);
  if (!(o.mu2 > 0.0)) {
    throw CeoError(ErrorCode::kInvalidArgument, "both weights must be positive");
  }
  const SymMatrix a = PrecisionWithSecond(inst, o);
  const double gap = o.mu1 - o.mu2;
  return tplus +
         0.5 * o.mu2 * (logdet(a - target.d_inv()) - LogdetScaled(o.mu2 / o.mu1, a)) +
         0.5 * gap * (LogdetScaled(o.mu1 / gap, inverse(a)) - target.logdet());
}

Allocation corollary4_witness(const CeoInstance& inst, const DistortionTarget& target,
                              const WeightVector& mu) {
  RequireAssumptions(check_gap_assumptions(inst, target, mu));
  const Orientation o = Orient(mu);
  const SymMatrix a = PrecisionWithSecond(inst, o);
  Allocation alloc;
  alloc.mats.resize(2);
  alloc.mats[o.hi] = inst.noise(o.hi);
  alloc.mats[o.lo] = a.Congruence(inst.noise(o.lo).matrix()) * (o.mu2 / o.mu1);
  return alloc;
}

// -- Parallel model -----------------------------------------------------------

namespace {

// Oriented parameters of an L = M = 2 parallel instance.
struct ParallelParams {
  Orientation o;
  double s1, s2;      // source variances
  double s11, s21;    // component-1 noise of the high / low weight sensor
  double s12, s22;    // component-2 noise of the high / low weight sensor
  double d1, d2;
};

ParallelParams Params(const ParallelCeoInstance& inst, const WeightVector& mu) {
  inst.Validate();
  if (inst.num_sensors() != 2 || inst.num_components() != 2) {
    throw CeoError(ErrorCode::kWrongSensorCount,
                   "parallel closed forms need L = M = 2");
  }
  ParallelParams p;
  p.o = Orient(mu);
  p.s1 = inst.source_vars[0];
  p.s2 = inst.source_vars[1];
  p.s11 = inst.noise_vars[p.o.hi][0];
  p.s21 = inst.noise_vars[p.o.lo][0];
  p.s12 = inst.noise_vars[p.o.hi][1];
  p.s22 = inst.noise_vars[p.o.lo][1];
  p.d1 = inst.targets[0];
  p.d2 = inst.targets[1];
  return p;
}

double F1(const ParallelParams& p, double d11, double d21) {
  if (!(d11 > 0.0 && d21 > 0.0 && d11 <= p.s11 && d21 <= p.s21)) {
    return std::numeric_limits<double>::infinity();
  }
  const double mu1 = p.o.mu1, mu2 = p.o.mu2;
  const double inner = 1.0 / p.s1 + (p.s21 - d21) / (p.s21 * p.s21);
  return 0.5 * mu1 * std::log(p.s11 / d11) + 0.5 * mu2 * std::log(p.s21 / d21) +
         0.5 * mu2 * std::log(p.s1 / p.d1) +
         0.5 * (mu1 - mu2) * std::log(1.0 / (p.d1 * inner));
}

struct F1Min {
  double value, d11, d21;
};

// Minimizes f1 on the component-1 equality segment, parameterized by D21.
F1Min MinimizeF1(const ParallelParams& p) {
  const double c = 1.0 / p.s1 + 1.0 / p.s11 + 1.0 / p.s21 - 1.0 / p.d1;
  const double lo = std::max(0.0, p.s21 * p.s21 * (c - 1.0 / p.s11));
  const double hi = std::min(p.s21, p.s21 * p.s21 * c);
  if (!(hi > lo)) {
    throw CeoError(ErrorCode::kInfeasible, "component-1 equality segment is degenerate");
  }
  auto d11_of = [&](double d21) { return p.s11 * p.s11 * (c - d21 / (p.s21 * p.s21)); };
  auto obj = [&](double d21) { return F1(p, d11_of(d21), d21); };
  const auto best = boost::math::tools::brent_find_minima(
      obj, lo, hi, std::numeric_limits<double>::digits);
  return {best.second, d11_of(best.first), best.first};
}

ParallelAllocation Witness(const ParallelParams& p, const F1Min& m, double d22) {
  ParallelAllocation w(2, std::vector<double>(2));
  w[p.o.hi][0] = m.d11;
  w[p.o.lo][0] = m.d21;
  w[p.o.hi][1] = p.s12;
  w[p.o.lo][1] = d22;
  return w;
}

}  // namespace

AssumptionReport check_parallel_assumptions(const ParallelCeoInstance& inst,
                                            const WeightVector& mu) {
  const ParallelParams p = Params(inst, mu);
  const double mu1 = p.o.mu1, mu2 = p.o.mu2;
  const double a2 = 1.0 / p.s2 + 1.0 / p.s22;
  AssumptionReport r;
  r.swapped = p.o.swapped;
  r.checks.push_back(ScalarCheck("(mu2/mu1)/s12 < 1/s2 + 1/s22 - 1/D2",
                                 (mu2 / mu1) / p.s12, a2 - 1.0 / p.d2));
  const double inf = std::numeric_limits<double>::infinity();
  const bool distinct = mu1 > mu2;
  const double gap = mu1 - mu2;
  r.checks.push_back(ScalarCheck("mu2/(mu1-mu2)/s2 < 1/s22",
                                 distinct ? mu2 / gap / p.s2 : inf, 1.0 / p.s22));
  r.checks.push_back(ScalarCheck("mu1/(mu1-mu2)/D2 < 1/s2 + 1/s22",
                                 distinct ? mu1 / gap / p.d2 : inf, a2));
  r.checks.push_back(ScalarCheck("((mu1-mu2)/mu1) D2 (1/s2 + 1/s22) < (1/D1)(1/s1 + 1/s21)^-1",
                                 gap / mu1 * p.d2 * a2,
                                 1.0 / (p.d1 * (1.0 / p.s1 + 1.0 / p.s21))));
  for (auto& c : r.checks) {
    if (std::isinf(c.lhs)) c.margin = -inf;
  }
  return r;
}

double parallel_f1(const ParallelCeoInstance& inst, const WeightVector& mu, double d11,
                   double d21) {
  return F1(Params(inst, mu), d11, d21);
}

ParallelClosedForm corollary5_parallel_tp(const ParallelCeoInstance& inst,
                                          const WeightVector& mu) {
  RequireAssumptions(check_parallel_assumptions(inst, mu));
  const ParallelParams p = Params(inst, mu);
  const F1Min m = MinimizeF1(p);
  const double mu2 = p.o.mu2;
  const double rest = 1.0 / p.s2 + 1.0 / p.s22 - 1.0 / p.d2;
  ParallelClosedForm out;
  out.f1_min = m.value;
  out.d11 = m.d11;
  out.d21 = m.d21;
  out.value = m.value + 0.5 * mu2 * std::log(p.s2 / p.d2) +
              0.5 * mu2 * std::log(1.0 / (p.s22 * rest));
  out.witness = Witness(p, m, p.s22 * p.s22 * rest);
  if (p.o.swapped) std::swap(out.d11, out.d21);
  return out;
}

ParallelClosedForm corollary6_tplus_upper(const ParallelCeoInstance& inst,
                                          const WeightVector& mu) {
  RequireAssumptions(check_parallel_assumptions(inst, mu));
  const ParallelParams p = Params(inst, mu);
  const F1Min m = MinimizeF1(p);
  const double mu1 = p.o.mu1, mu2 = p.o.mu2;
  if (!(mu2 > 0.0)) {
    throw CeoError(ErrorCode::kInvalidArgument, "both weights must be positive");
  }
  const double a2 = 1.0 / p.s2 + 1.0 / p.s22;
  ParallelClosedForm out;
  out.f1_min = m.value;
  out.d11 = m.d11;
  out.d21 = m.d21;
  out.value = m.value + 0.5 * mu2 * std::log((mu1 / mu2) / (p.s22 * a2)) +
              0.5 * mu2 * std::log(p.s2 / p.d2) +
              0.5 * (mu1 - mu2) * std::log((mu1 / (mu1 - mu2)) / (p.d2 * a2));
  out.witness = Witness(p, m, (mu2 / mu1) * p.s22 * p.s22 * a2);
  if (p.o.swapped) std::swap(out.d11, out.d21);
  return out;
}

}  // namespace ceo
