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

#include "ceo/optimize.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <thread>

#include "ceo/tangent_objective.h"

namespace ceo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kStepFloor = 1e-12;
constexpr double kStepCeil = 1e6;
constexpr double kArmijo = 1e-4;

double Dot(const Point& a, const Point& b) {
  double s = 0.0;
  for (size_t l = 0; l < a.size(); ++l) s += a[l].cwiseProduct(b[l]).sum();
  return s;
}

Point Combine(const Point& x, double a, const Point& y) {
  Point out(x.size());
  for (size_t l = 0; l < x.size(); ++l) out[l] = x[l] + a * y[l];
  return out;
}

Point Scaled(const Point& x, double t) {
  Point out(x.size());
  for (size_t l = 0; l < x.size(); ++l) out[l] = t * x[l];
  return out;
}

Eigen::MatrixXd PsdPart(const Eigen::MatrixXd& a) {
  if (a.rows() == 1) return Eigen::MatrixXd::Constant(1, 1, std::max(0.0, a(0, 0)));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(a);
  return s.eigenvectors() * s.eigenvalues().cwiseMax(0.0).asDiagonal() *
         s.eigenvectors().transpose();
}

int ResolveThreads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CEO_REGION_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

// Projected gradient with Barzilai-Borwein trial steps and halving
// backtracking on the augmented Lagrangian. Returns iterations used.
int InnerSolve(const TangentObjective& obj, const Multiplier& al, Point* e, int budget,
               const OptimizerOptions& opts) {
  Point g;
  double f = obj.Evaluate(*e, &al, &g);
  if (!std::isfinite(f)) return budget;
  double step = opts.step_init;
  Point e_prev, g_prev;
  int quiet = 0;
  int it = 0;
  for (; it < budget; ++it) {
    if (it > 0) {
      const Point s = Combine(*e, -1.0, e_prev);
      const Point y = Combine(g, -1.0, g_prev);
      const double sy = Dot(s, y);
      step = sy > 0.0 ? std::clamp(Dot(s, s) / sy, kStepFloor, kStepCeil)
                      : std::min(2.0 * step, kStepCeil);
    }
    Point trial, g_trial;
    double f_trial = kInf;
    bool accepted = false;
    while (step >= kStepFloor) {
      trial = Combine(*e, -step, g);
      ProjectUnitBox(&trial);
      const Point d = Combine(trial, -1.0, *e);
      const double dd = Dot(d, d);
      if (dd == 0.0) return it;
      f_trial = obj.Evaluate(trial, &al, &g_trial);
      if (std::isfinite(f_trial) && f_trial <= f + kArmijo * Dot(g, d)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) return it;
    const double decrease = f - f_trial;
    e_prev = std::move(*e);
    g_prev = std::move(g);
    *e = std::move(trial);
    g = std::move(g_trial);
    f = f_trial;
    quiet = decrease <= opts.tol_obj * (1.0 + std::abs(f)) ? quiet + 1 : 0;
    if (quiet >= 3) return it + 1;
  }
  return it;
}

// Largest t in [0, 1] with t * e feasible; t = 0 is feasible by assumption.
Point Restore(const TangentObjective& obj, const Point& e) {
  if (obj.ConstraintMargin(e) >= 0.0) return e;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 80 && hi - lo > 1e-17; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (obj.ConstraintMargin(Scaled(e, mid)) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return Scaled(e, lo);
}

struct StartResult {
  Point e;
  double value = kInf;
};

StartResult RunStart(const TangentObjective& obj, Point e, const OptimizerOptions& opts) {
  ProjectUnitBox(&e);
  const int m = obj.dim();
  // The outer kind's log+ kinks often sit on the active constraint; a
  // softplus shrinking with the penalty gets near them before the exact
  // objective takes over.
  const bool smooth = obj.kind() == TangentKind::kOuter;
  Multiplier al{Eigen::MatrixXd::Zero(m, m), opts.penalty_init,
                smooth ? 1.0 / opts.penalty_init : 0.0};
  int left = opts.max_iters;
  double prev = kInf;
  while (left > 0) {
    left -= std::max(1, InnerSolve(obj, al, &e, left, opts));
    const Eigen::MatrixXd g = obj.Constraint(e);
    const double f = obj.Evaluate(e, nullptr, nullptr);
    const Eigen::MatrixXd next = PsdPart(al.lambda - al.rho * g);
    const double margin = obj.ConstraintMargin(e);
    const bool settled = al.rho >= opts.penalty_max ||
                         (next - al.lambda).norm() <= 1e-10 * (1.0 + next.norm());
    if (margin >= -1e-12 && settled && al.tau == 0.0 &&
        std::abs(f - prev) <= opts.tol_obj * (1.0 + std::abs(f))) {
      break;
    }
    al.lambda = next;
    al.tau = smooth && al.rho < opts.penalty_max ? 1.0 / (10.0 * al.rho) : 0.0;
    al.rho = std::min(al.rho * 10.0, opts.penalty_max);
    prev = f;
  }
  StartResult r;
  r.e = Restore(obj, e);
  r.value = obj.Evaluate(r.e, nullptr, nullptr);
  return r;
}

Point RandomStart(const TangentObjective& obj, uint64_t seed, int index) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  Point e(obj.num_sensors());
  for (int l = 0; l < obj.num_sensors(); ++l) {
    const int r = obj.rows(l);
    Eigen::MatrixXd a(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) a(i, j) = normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    const Eigen::MatrixXd q = qr.householderQ();
    Eigen::VectorXd u(r);
    for (int i = 0; i < r; ++i) u(i) = unif(rng);
    e[l] = q * u.asDiagonal() * q.transpose();
    e[l] = 0.5 * (e[l] + e[l].transpose());
  }
  return e;
}

Point IdentityPoint(const TangentObjective& obj, double t) {
  Point e(obj.num_sensors());
  for (int l = 0; l < obj.num_sensors(); ++l) {
    e[l] = t * Eigen::MatrixXd::Identity(obj.rows(l), obj.rows(l));
  }
  return e;
}

// Multi-start driver in the general frame; returns the best point.
Point Solve(const TangentObjective& obj, const OptimizerOptions& opts,
            const std::optional<Point>& warm) {
  opts.Validate();
  if (obj.ConstraintMargin(IdentityPoint(obj, 0.0)) < -1e-12) {
    throw CeoError(ErrorCode::kInfeasible,
                   "no allocation meets the distortion target (target below the "
                   "collective MMSE)");
  }
  std::vector<Point> starts;
  if (warm) starts.push_back(*warm);
  for (int i = 0; i < opts.starts; ++i) {
    switch (i) {
      case 0: starts.push_back(IdentityPoint(obj, 1.0)); break;
      case 1: starts.push_back(IdentityPoint(obj, 0.5)); break;
      case 2: starts.push_back(Restore(obj, IdentityPoint(obj, 1.0))); break;
      default: starts.push_back(RandomStart(obj, opts.seed, i));
    }
  }

  std::vector<StartResult> results(starts.size());
  const int threads = std::min<int>(ResolveThreads(opts.threads), starts.size());
  if (threads <= 1) {
    for (size_t i = 0; i < starts.size(); ++i) results[i] = RunStart(obj, starts[i], opts);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (size_t i; (i = next++) < starts.size();) {
          results[i] = RunStart(obj, starts[i], opts);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  size_t best = 0;
  for (size_t i = 1; i < results.size(); ++i) {
    if (results[i].value < results[best].value) best = i;
  }
  if (!std::isfinite(results[best].value)) {
    throw CeoError(ErrorCode::kInfeasible, "no start reached a finite objective");
  }
  return results[best].e;
}

Allocation ToAllocation(const Point& e, Frame frame) {
  Allocation a;
  a.frame = frame;
  for (const auto& block : e) a.mats.push_back(SymMatrix::SymmetricPart(block));
  return a;
}

Point ToPoint(const Allocation& a) {
  Point e;
  for (const auto& m : a.mats) e.push_back(m.matrix());
  return e;
}

void PositiveCheck(bool ok, const char* what) {
  if (!ok) throw CeoError(ErrorCode::kInvalidArgument, std::string(what) + " must be positive");
}

}  // namespace

void OptimizerOptions::Validate() const {
  PositiveCheck(starts > 0, "starts");
  PositiveCheck(max_iters > 0, "max_iters");
  PositiveCheck(step_init > 0.0, "step_init");
  PositiveCheck(tol_obj > 0.0, "tol_obj");
  PositiveCheck(penalty_init > 0.0 && penalty_max >= penalty_init, "penalty schedule");
  PositiveCheck(threads >= 0, "threads");
}

void GridOptions::Validate() const {
  PositiveCheck(resolution >= 2, "resolution (>= 2)");
  PositiveCheck(refine_levels >= 0, "refine_levels (>= 0)");
  PositiveCheck(zoom >= 0.0 && zoom < 1.0, "zoom (in [0, 1))");
}

BoundReport make_report(TangentKind kind, const CeoInstance& inst,
                        const DistortionTarget& target, const WeightVector& mu,
                        Allocation alloc) {
  BoundReport r;
  r.kind = kind;
  alloc.frame = Frame::kAligned;
  r.value = tangent_value(kind, inst, alloc, target, mu);
  r.feasibility = alloc_feasible(inst, alloc, target);
  const uint32_t full = SubsetId::Full(inst.num_sensors()).bits();
  for (uint32_t bits = 0; bits <= full; ++bits) {
    const SubsetId s(bits);
    r.per_subset[bits] = kind == TangentKind::kInner
                             ? inner_subset_bound(inst, alloc, s)
                             : outer_subset_bound(inst, alloc, target, s);
  }
  if (kind == TangentKind::kOuter) {
    r.vertex = vertex_rates(inst, alloc, target, mu.DescendingOrder());
  }
  r.allocation = std::move(alloc);
  return r;
}

BoundReport make_report(TangentKind kind, const GeneralCeoInstance& inst,
                        const DistortionTarget& target, const WeightVector& mu,
                        Allocation alloc) {
  BoundReport r;
  r.kind = kind;
  alloc.frame = Frame::kGeneral;
  r.value = general_tangent_value(kind, inst, alloc, target, mu);
  r.feasibility = general_alloc_feasible(inst, alloc, target);
  const BoundKind bk = kind == TangentKind::kInner ? BoundKind::kInner : BoundKind::kOuter;
  const uint32_t full = SubsetId::Full(inst.num_sensors()).bits();
  for (uint32_t bits = 0; bits <= full; ++bits) {
    r.per_subset[bits] = general_subset_bound(inst, alloc, target, SubsetId(bits), bk);
  }
  r.allocation = std::move(alloc);
  return r;
}

BoundReport minimize_tangent(TangentKind kind, const CeoInstance& inst,
                             const DistortionTarget& target, const WeightVector& mu,
                             const OptimizerOptions& opts,
                             const std::optional<Allocation>& warm_start) {
  const TangentObjective obj(kind, align_to_general(inst), target, mu);
  std::optional<Point> warm;
  if (warm_start) warm = ToPoint(whiten_allocation(inst, *warm_start));
  const Point e = Solve(obj, opts, warm);
  const Allocation aligned = unwhiten_allocation(inst, ToAllocation(e, Frame::kGeneral));
  return make_report(kind, inst, target, mu, aligned);
}

BoundReport minimize_tangent(TangentKind kind, const GeneralCeoInstance& inst,
                             const DistortionTarget& target, const WeightVector& mu,
                             const OptimizerOptions& opts,
                             const std::optional<Allocation>& warm_start) {
  const TangentObjective obj(kind, inst, target, mu);
  std::optional<Point> warm;
  if (warm_start) warm = ToPoint(*warm_start);
  const Point e = Solve(obj, opts, warm);
  return make_report(kind, inst, target, mu, ToAllocation(e, Frame::kGeneral));
}

std::vector<TraceRow> trace_region(TangentKind kind, const CeoInstance& inst,
                                   const DistortionTarget& target,
                                   const std::vector<WeightVector>& mu_list,
                                   const OptimizerOptions& opts) {
  std::vector<TraceRow> rows;
  std::optional<Allocation> warm;
  for (const auto& mu : mu_list) {
    TraceRow row{mu.values(), minimize_tangent(kind, inst, target, mu, opts, warm)};
    warm = row.report.allocation;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<TraceRow> trace_region(TangentKind kind, const GeneralCeoInstance& inst,
                                   const DistortionTarget& target,
                                   const std::vector<WeightVector>& mu_list,
                                   const OptimizerOptions& opts) {
  std::vector<TraceRow> rows;
  std::optional<Allocation> warm;
  for (const auto& mu : mu_list) {
    TraceRow row{mu.values(), minimize_tangent(kind, inst, target, mu, opts, warm)};
    warm = row.report.allocation;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ceo
