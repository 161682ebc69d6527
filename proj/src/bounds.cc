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

#include "ceo/bounds.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace ceo {

std::string_view TangentKindName(TangentKind kind) {
  switch (kind) {
    case TangentKind::kOuter: return "outer";
    case TangentKind::kInner: return "inner";
    case TangentKind::kChenWang: return "chen-wang";
  }
  return "unknown";
}

WeightVector::WeightVector(std::vector<double> mu) : mu_(std::move(mu)) {
  if (mu_.empty()) throw CeoError(ErrorCode::kInvalidArgument, "empty weight vector");
  bool any_positive = false;
  for (double v : mu_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw CeoError(ErrorCode::kInvalidArgument, "weights must be finite and >= 0");
    }
    any_positive |= v > 0.0;
  }
  if (!any_positive) {
    throw CeoError(ErrorCode::kInvalidArgument, "at least one weight must be positive");
  }
}

std::vector<int> WeightVector::DescendingOrder() const {
  std::vector<int> order(mu_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [this](int a, int b) { return mu_[a] > mu_[b]; });
  return order;
}

SubsetId SubsetId::Of(std::initializer_list<int> members) {
  uint32_t bits = 0;
  for (int l : members) bits |= 1u << l;
  return SubsetId(bits);
}

int SubsetId::size() const { return std::popcount(bits_); }

std::string SubsetId::ToString(int num_sensors) const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (int l = 0; l < num_sensors; ++l) {
    if (!contains(l)) continue;
    if (!first) os << ",";
    os << l + 1;
    first = false;
  }
  os << "}";
  return os.str();
}

namespace {

void CheckSensorCount(int have, int want) {
  if (have != want) {
    throw CeoError(ErrorCode::kWrongSensorCount,
                   "allocation has " + std::to_string(have) + " matrices, instance has " +
                       std::to_string(want) + " sensors");
  }
}

void CheckAligned(const CeoInstance& inst, const Allocation& alloc) {
  CheckSensorCount(alloc.size(), inst.num_sensors());
  for (int l = 0; l < alloc.size(); ++l) {
    require_same_dim(inst.kx(), alloc[l], "allocation");
  }
}

void CheckGeneral(const GeneralCeoInstance& inst, const Allocation& alloc) {
  CheckSensorCount(alloc.size(), inst.num_sensors());
  for (int l = 0; l < alloc.size(); ++l) {
    if (alloc[l].dim() != inst.rows(l)) {
      throw CeoError(ErrorCode::kDimensionMismatch,
                     "allocation " + std::to_string(l + 1) + " must be " +
                         std::to_string(inst.rows(l)) + "x" + std::to_string(inst.rows(l)));
    }
  }
}

void CheckTarget(const SymMatrix& kx, const DistortionTarget& target) {
  require_same_dim(kx, target.d(), "distortion target");
}

double LogPlus(double x) { return std::max(0.0, x); }

// -1/2 logdet D_l with D_l possibly singular (then +infinity).
double HalfNegLogdet(const SymMatrix& d) { return -0.5 * logdet_or_neg_inf(d); }

// Shared tangent evaluation. `neg_logdet_p(S)` returns -logdet P(S),
// `sensor(l)` the per-sensor rate term.
double TangentCore(TangentKind kind, const WeightVector& mu, int num_sensors,
                   const std::function<double(SubsetId)>& neg_logdet_p,
                   const std::function<double(int)>& sensor, double logdet_kx,
                   double logdet_d) {
  CheckSensorCount(mu.size(), num_sensors);
  if (kind == TangentKind::kChenWang && num_sensors != 2) {
    throw CeoError(ErrorCode::kWrongSensorCount,
                   "the Chen-Wang bound is defined for two sensors only");
  }
  const std::vector<int> order = mu.DescendingOrder();
  const int n = num_sensors;
  const double ref =
      kind == TangentKind::kInner ? neg_logdet_p(SubsetId::Full(n)) : logdet_d;
  double value = 0.0;
  for (int k = 0; k + 1 < n; ++k) {
    const double c = mu[order[k]] - mu[order[k + 1]];
    if (c <= 0.0) continue;
    uint32_t bits = 0;
    for (int j = k + 1; j < n; ++j) bits |= 1u << order[j];
    const double x = neg_logdet_p(SubsetId(bits)) - ref;
    value += 0.5 * c * (kind == TangentKind::kOuter ? LogPlus(x) : x);
  }
  for (int l = 0; l < n; ++l) {
    if (mu[l] > 0.0) value += mu[l] * sensor(l);
  }
  const double last = mu[order[n - 1]];
  if (last > 0.0) value += 0.5 * last * (logdet_kx - ref);
  return value;
}

}  // namespace

// -- Aligned model ----------------------------------------------------------

SymMatrix effective_precision(const CeoInstance& inst, const Allocation& alloc,
                              SubsetId subset) {
  CheckAligned(inst, alloc);
  Eigen::MatrixXd p = inst.kx_inv().matrix();
  for (int l = 0; l < inst.num_sensors(); ++l) {
    if (!subset.contains(l)) continue;
    const Eigen::MatrixXd& si = inst.noise_inv(l).matrix();
    p += si - si * alloc[l].matrix() * si;
  }
  return SymMatrix::SymmetricPart(p);
}

namespace {

double AlignedSensorTerm(const CeoInstance& inst, const Allocation& alloc, int l) {
  return 0.5 * inst.logdet_noise(l) + HalfNegLogdet(alloc[l]);
}

}  // namespace

double outer_subset_bound(const CeoInstance& inst, const Allocation& alloc,
                          const DistortionTarget& target, SubsetId subset) {
  CheckTarget(inst.kx(), target);
  const int n = inst.num_sensors();
  const SymMatrix p = effective_precision(inst, alloc, subset.Complement(n));
  double value = 0.5 * LogPlus(-logdet(p) - target.logdet());
  for (int l = 0; l < n; ++l) {
    if (subset.contains(l)) value += AlignedSensorTerm(inst, alloc, l);
  }
  return value;
}

double inner_subset_bound(const CeoInstance& inst, const Allocation& alloc,
                          SubsetId subset) {
  const int n = inst.num_sensors();
  const double ld_rest = logdet(effective_precision(inst, alloc, subset.Complement(n)));
  const double ld_all = logdet(effective_precision(inst, alloc, SubsetId::Full(n)));
  double value = 0.5 * (ld_all - ld_rest);
  for (int l = 0; l < n; ++l) {
    if (subset.contains(l)) value += AlignedSensorTerm(inst, alloc, l);
  }
  return value;
}

Feasibility alloc_feasible(const CeoInstance& inst, const Allocation& alloc,
                           const DistortionTarget& target) {
  CheckAligned(inst, alloc);
  CheckTarget(inst.kx(), target);
  Feasibility f;
  f.ok = true;
  auto check = [&f](const SymMatrix& lo, const SymMatrix& hi) {
    f.ok = f.ok && psd_leq(lo, hi, kFeasibilityTol);
    f.max_violation = std::max(f.max_violation, -(hi - lo).MinEigenvalue());
  };
  const SymMatrix zero = SymMatrix::Zero(inst.dim());
  for (int l = 0; l < inst.num_sensors(); ++l) {
    check(zero, alloc[l]);
    check(alloc[l], inst.noise(l));
  }
  const SymMatrix p_all = effective_precision(inst, alloc, SubsetId::Full(inst.num_sensors()));
  if (p_all.MinEigenvalue() <= 0.0) {
    f.ok = false;
    f.max_violation = kInfiniteRate;
    return f;
  }
  check(inverse(p_all), target.d());
  return f;
}

double set_function(const CeoInstance& inst, const Allocation& alloc,
                    const DistortionTarget& target, SubsetId subset) {
  CheckTarget(inst.kx(), target);
  const SymMatrix p =
      effective_precision(inst, alloc, subset.Complement(inst.num_sensors()));
  return 0.5 * LogPlus(-logdet(p) - target.logdet());
}

std::vector<double> vertex_rates(const CeoInstance& inst, const Allocation& alloc,
                                 const DistortionTarget& target,
                                 const std::vector<int>& order) {
  const int n = inst.num_sensors();
  CheckSensorCount(static_cast<int>(order.size()), n);
  std::vector<bool> seen(n, false);
  for (int l : order) {
    if (l < 0 || l >= n || seen[l]) {
      throw CeoError(ErrorCode::kInvalidArgument, "order is not a permutation");
    }
    seen[l] = true;
  }
  std::vector<double> rates(n, 0.0);
  SubsetId prefix;
  double prev = set_function(inst, alloc, target, prefix);
  for (int l : order) {
    prefix = prefix.With(l);
    const double cur = set_function(inst, alloc, target, prefix);
    rates[l] = cur - prev + AlignedSensorTerm(inst, alloc, l);
    prev = cur;
  }
  return rates;
}

double tangent_value(TangentKind kind, const CeoInstance& inst, const Allocation& alloc,
                     const DistortionTarget& target, const WeightVector& mu) {
  CheckAligned(inst, alloc);
  CheckTarget(inst.kx(), target);
  return TangentCore(
      kind, mu, inst.num_sensors(),
      [&](SubsetId s) { return -logdet(effective_precision(inst, alloc, s)); },
      [&](int l) { return AlignedSensorTerm(inst, alloc, l); }, inst.logdet_kx(),
      target.logdet());
}

double outer_tangent_value(const CeoInstance& inst, const Allocation& alloc,
                           const DistortionTarget& target, const WeightVector& mu) {
  return tangent_value(TangentKind::kOuter, inst, alloc, target, mu);
}

double inner_tangent_value(const CeoInstance& inst, const Allocation& alloc,
                           const DistortionTarget& target, const WeightVector& mu) {
  return tangent_value(TangentKind::kInner, inst, alloc, target, mu);
}

double chen_wang_tangent_value(const CeoInstance& inst, const Allocation& alloc,
                               const DistortionTarget& target, const WeightVector& mu) {
  return tangent_value(TangentKind::kChenWang, inst, alloc, target, mu);
}

// -- General model ------------------------------------------------------------

SymMatrix general_effective_precision(const GeneralCeoInstance& inst,
                                      const Allocation& alloc, SubsetId subset) {
  CheckGeneral(inst, alloc);
  Eigen::MatrixXd p = inst.kx_inv().matrix();
  for (int l = 0; l < inst.num_sensors(); ++l) {
    if (!subset.contains(l)) continue;
    const GenMatrix& h = inst.channel(l);
    const int r = inst.rows(l);
    p += h.transpose() * (Eigen::MatrixXd::Identity(r, r) - alloc[l].matrix()) * h;
  }
  return SymMatrix::SymmetricPart(p);
}

double general_subset_bound(const GeneralCeoInstance& inst, const Allocation& alloc,
                            const DistortionTarget& target, SubsetId subset,
                            BoundKind kind) {
  CheckTarget(inst.kx(), target);
  const int n = inst.num_sensors();
  const double neg_rest =
      -logdet(general_effective_precision(inst, alloc, subset.Complement(n)));
  double value;
  if (kind == BoundKind::kOuter) {
    value = 0.5 * LogPlus(neg_rest - target.logdet());
  } else {
    value = 0.5 * (neg_rest +
                   logdet(general_effective_precision(inst, alloc, SubsetId::Full(n))));
  }
  for (int l = 0; l < n; ++l) {
    if (subset.contains(l)) value += HalfNegLogdet(alloc[l]);
  }
  return value;
}

Feasibility general_alloc_feasible(const GeneralCeoInstance& inst,
                                   const Allocation& alloc,
                                   const DistortionTarget& target) {
  CheckGeneral(inst, alloc);
  CheckTarget(inst.kx(), target);
  Feasibility f;
  f.ok = true;
  auto check = [&f](const SymMatrix& lo, const SymMatrix& hi) {
    f.ok = f.ok && psd_leq(lo, hi, kFeasibilityTol);
    f.max_violation = std::max(f.max_violation, -(hi - lo).MinEigenvalue());
  };
  for (int l = 0; l < inst.num_sensors(); ++l) {
    check(SymMatrix::Zero(inst.rows(l)), alloc[l]);
    check(alloc[l], SymMatrix::Identity(inst.rows(l)));
  }
  const SymMatrix p_all =
      general_effective_precision(inst, alloc, SubsetId::Full(inst.num_sensors()));
  if (p_all.MinEigenvalue() <= 0.0) {
    f.ok = false;
    f.max_violation = kInfiniteRate;
    return f;
  }
  check(inverse(p_all), target.d());
  return f;
}

double general_tangent_value(TangentKind kind, const GeneralCeoInstance& inst,
                             const Allocation& alloc, const DistortionTarget& target,
                             const WeightVector& mu) {
  CheckGeneral(inst, alloc);
  CheckTarget(inst.kx(), target);
  return TangentCore(
      kind, mu, inst.num_sensors(),
      [&](SubsetId s) { return -logdet(general_effective_precision(inst, alloc, s)); },
      [&](int l) { return HalfNegLogdet(alloc[l]); }, inst.logdet_kx(), target.logdet());
}

Allocation whiten_allocation(const CeoInstance& inst, const Allocation& alloc) {
  CheckAligned(inst, alloc);
  Allocation out;
  out.frame = Frame::kGeneral;
  for (int l = 0; l < alloc.size(); ++l) {
    out.mats.push_back(alloc[l].Congruence(inst.noise_inv_sqrt(l).matrix()));
  }
  return out;
}

Allocation unwhiten_allocation(const CeoInstance& inst, const Allocation& alloc) {
  CheckAligned(inst, alloc);
  Allocation out;
  out.frame = Frame::kAligned;
  for (int l = 0; l < alloc.size(); ++l) {
    out.mats.push_back(alloc[l].Congruence(sym_sqrt(inst.noise(l)).matrix()));
  }
  return out;
}

// -- Scalar and parallel models ----------------------------------------------

double scalar_subset_bound(const ScalarCeoInstance& inst, double d,
                           const std::vector<double>& d_alloc, SubsetId subset) {
  inst.Validate();
  const int n = inst.num_sensors();
  CheckSensorCount(static_cast<int>(d_alloc.size()), n);
  if (!(d > 0.0)) throw CeoError(ErrorCode::kNotPositiveDefinite, "distortion must be > 0");
  double p = 1.0 / inst.var_x;
  double value = 0.0;
  for (int l = 0; l < n; ++l) {
    const double s = inst.noise_vars[l];
    if (subset.contains(l)) {
      value += d_alloc[l] > 0.0 ? 0.5 * std::log(s / d_alloc[l]) : kInfiniteRate;
    } else {
      p += (s - d_alloc[l]) / (s * s);
    }
  }
  if (!(p > 0.0)) {
    throw CeoError(ErrorCode::kNotPositiveDefinite, "effective precision is not positive");
  }
  return value + 0.5 * LogPlus(-std::log(p * d));
}

double parallel_subset_bound(const ParallelCeoInstance& inst,
                             const std::vector<std::vector<double>>& d_alloc,
                             SubsetId subset) {
  inst.Validate();
  const int n = inst.num_sensors();
  const int m = inst.num_components();
  CheckSensorCount(static_cast<int>(d_alloc.size()), n);
  for (const auto& row : d_alloc) {
    if (static_cast<int>(row.size()) != m) {
      throw CeoError(ErrorCode::kDimensionMismatch, "allocation must be L x M");
    }
  }
  double total = 0.0;
  for (int c = 0; c < m; ++c) {
    const ScalarCeoInstance comp = inst.Component(c);
    std::vector<double> col(n);
    double p = 1.0 / comp.var_x;
    for (int l = 0; l < n; ++l) {
      col[l] = d_alloc[l][c];
      const double s = comp.noise_vars[l];
      p += (s - col[l]) / (s * s);
    }
    const double dm = inst.targets[c];
    if (!(p > 0.0) || std::abs(1.0 / p - dm) > kFeasibilityTol * std::max(1.0, dm)) {
      std::ostringstream os;
      os << "component " << c + 1 << ": achieved distortion "
         << (p > 0.0 ? 1.0 / p : kInfiniteRate) << " differs from target " << dm;
      throw CeoError(ErrorCode::kConstraintNotSaturated, os.str());
    }
    total += scalar_subset_bound(comp, dm, col, subset);
  }
  return total;
}

}  // namespace ceo
