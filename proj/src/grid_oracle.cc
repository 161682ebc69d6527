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

// Brute-force tangent minimization for diagonal instances. Deliberately
// shares no evaluation code with the matrix path: with everything diagonal,
// each determinant is a product over components and is computed directly.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "ceo/optimize.h"

namespace ceo {

namespace {

constexpr int kMaxDof = 4;
constexpr double kInf = std::numeric_limits<double>::infinity();

class DiagonalTangent {
 public:
  DiagonalTangent(TangentKind kind, const CeoInstance& inst,
                  const DistortionTarget& target, const WeightVector& mu)
      : kind_(kind), n_(inst.num_sensors()), m_(inst.dim()), mu_(mu.values()) {
    for (int c = 0; c < m_; ++c) {
      kx_.push_back(inst.kx()(c, c));
      d_.push_back(target.d()(c, c));
    }
    for (int l = 0; l < n_; ++l) {
      for (int c = 0; c < m_; ++c) noise_.push_back(inst.noise(l)(c, c));
    }
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int a, int b) { return mu_[a] > mu_[b]; });
  }

  double noise(int l, int c) const { return noise_[l * m_ + c]; }
  int dim() const { return m_; }

  // 1/d_c minus the component-c precision of all sensors; positive when the
  // distortion target is missed.
  double Deficit(const double* x, int c) const {
    double p = 1.0 / kx_[c];
    for (int l = 0; l < n_; ++l) {
      const double s = noise(l, c);
      p += (s - x[l * m_ + c]) / (s * s);
    }
    return 1.0 / d_[c] - p;
  }

  // x[l * M + c] is the (c, c) entry of D_l. +infinity when infeasible.
  double operator()(const double* x) const {
    // Per-component precision of each tail set and of the full set.
    double log_p_all = 0.0;
    for (int c = 0; c < m_; ++c) {
      double p = 1.0 / kx_[c];
      for (int l = 0; l < n_; ++l) {
        const double s = noise(l, c);
        p += (s - x[l * m_ + c]) / (s * s);
      }
      if (p * d_[c] < 1.0 - 1e-12) return kInf;
      log_p_all += std::log(p);
    }
    double value = 0.0;
    for (int l = 0; l < n_; ++l) {
      if (mu_[l] <= 0.0) continue;
      for (int c = 0; c < m_; ++c) {
        const double v = x[l * m_ + c];
        if (!(v > 0.0)) return kInf;
        value += 0.5 * mu_[l] * std::log(noise(l, c) / v);
      }
    }
    double log_d = 0.0, log_kx = 0.0;
    for (int c = 0; c < m_; ++c) {
      log_d += std::log(d_[c]);
      log_kx += std::log(kx_[c]);
    }
    const double ref = kind_ == TangentKind::kInner ? -log_p_all : log_d;
    for (int k = 0; k + 1 < n_; ++k) {
      const double w = mu_[order_[k]] - mu_[order_[k + 1]];
      if (w <= 0.0) continue;
      double log_p_tail = 0.0;
      for (int c = 0; c < m_; ++c) {
        double p = 1.0 / kx_[c];
        for (int j = k + 1; j < n_; ++j) {
          const int l = order_[j];
          const double s = noise(l, c);
          p += (s - x[l * m_ + c]) / (s * s);
        }
        log_p_tail += std::log(p);
      }
      double t = -log_p_tail - ref;
      if (kind_ == TangentKind::kOuter) t = std::max(0.0, t);
      value += 0.5 * w * t;
    }
    const double last = mu_[order_[n_ - 1]];
    if (last > 0.0) value += 0.5 * last * (log_kx - ref);
    return value;
  }

 private:
  TangentKind kind_;
  int n_, m_;
  std::vector<double> mu_, kx_, d_, noise_;
  std::vector<int> order_;
};

// Grid points rarely land on the constraint surface, where optima usually
// sit. An infeasible point is therefore also tried with, for each sensor in
// turn, that sensor's entries lowered until every component meets its target.
template <typename Visit>
void VisitWithSnaps(const DiagonalTangent& f, int num_sensors, double* x, Visit visit) {
  const int m = f.dim();
  bool feasible = true;
  for (int c = 0; c < m; ++c) feasible = feasible && f.Deficit(x, c) <= 0.0;
  visit(x);
  if (feasible) return;
  std::array<double, kMaxDof> y{};
  for (int l = 0; l < num_sensors; ++l) {
    std::copy(x, x + num_sensors * m, y.begin());
    bool ok = true;
    for (int c = 0; c < m && ok; ++c) {
      const double deficit = f.Deficit(x, c);
      if (deficit <= 0.0) continue;
      const double s = f.noise(l, c);
      y[l * m + c] = x[l * m + c] - s * s * deficit;
      ok = y[l * m + c] > 0.0;
    }
    if (ok) visit(y.data());
  }
}

}  // namespace

BoundReport grid_oracle(TangentKind kind, const CeoInstance& inst,
                        const DistortionTarget& target, const WeightVector& mu,
                        const GridOptions& gopts) {
  gopts.Validate();
  require_same_dim(inst.kx(), target.d(), "distortion target");
  if (mu.size() != inst.num_sensors()) {
    throw CeoError(ErrorCode::kWrongSensorCount, "weights do not match sensor count");
  }
  if (kind == TangentKind::kChenWang && inst.num_sensors() != 2) {
    throw CeoError(ErrorCode::kWrongSensorCount,
                   "the Chen-Wang bound is defined for two sensors only");
  }
  bool diagonal = inst.kx().IsDiagonal() && target.d().IsDiagonal();
  for (const auto& s : inst.noises()) diagonal = diagonal && s.IsDiagonal();
  const int dof = inst.num_sensors() * inst.dim();
  if (!diagonal || dof > kMaxDof) {
    throw CeoError(ErrorCode::kTooManyDegreesOfFreedom,
                   "grid oracle needs diagonal matrices and at most 4 unknowns, got " +
                       std::to_string(dof) + (diagonal ? "" : " (non-diagonal)"));
  }

  const DiagonalTangent f(kind, inst, target, mu);
  const int m = inst.dim();
  std::array<double, kMaxDof> lo{}, hi{}, best{}, x{};
  for (int v = 0; v < dof; ++v) {
    lo[v] = 0.0;
    hi[v] = f.noise(v / m, v % m);
  }
  const int res = gopts.resolution;
  double best_value = kInf;
  bool found = false;
  std::array<double, kMaxDof> half{};
  for (int v = 0; v < dof; ++v) half[v] = 0.5 * (hi[v] - lo[v]);
  for (int level = 0; level <= gopts.refine_levels; ++level) {
    std::array<int, kMaxDof> idx{};
    std::array<double, kMaxDof> cell{};
    for (int v = 0; v < dof; ++v) cell[v] = (hi[v] - lo[v]) / (res - 1);
    while (true) {
      for (int v = 0; v < dof; ++v) x[v] = lo[v] + idx[v] * cell[v];
      VisitWithSnaps(f, inst.num_sensors(), x.data(), [&](const double* p) {
        const double val = f(p);
        if (val < best_value) {
          best_value = val;
          std::copy(p, p + dof, best.begin());
          found = true;
        }
      });
      int v = 0;
      while (v < dof && ++idx[v] == res) idx[v++] = 0;
      if (v == dof) break;
    }
    if (!found) break;
    for (int v = 0; v < dof; ++v) {
      const double cap = f.noise(v / m, v % m);
      half[v] = std::max(2.0 * cell[v], gopts.zoom * half[v]);
      lo[v] = std::max(0.0, best[v] - half[v]);
      hi[v] = std::min(cap, best[v] + half[v]);
    }
  }
  if (!found) {
    throw CeoError(ErrorCode::kInfeasible, "no grid point meets the distortion target");
  }
  Allocation alloc;
  for (int l = 0; l < inst.num_sensors(); ++l) {
    std::vector<double> diag(best.begin() + l * m, best.begin() + (l + 1) * m);
    alloc.mats.push_back(SymMatrix::Diagonal(diag));
  }
  BoundReport r = make_report(kind, inst, target, mu, std::move(alloc));
  r.value = best_value;
  return r;
}

}  // namespace ceo
