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

#include "ceo/tangent_objective.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ceo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Eig {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

Eig Decompose(const Eigen::MatrixXd& a) {
  if (a.rows() == 1) {
    return {Eigen::VectorXd::Constant(1, a(0, 0)), Eigen::MatrixXd::Ones(1, 1)};
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(a);
  return {s.eigenvalues(), s.eigenvectors()};
}

// logdet and inverse of a PD matrix; false if not PD.
bool LogdetInverse(const Eigen::MatrixXd& a, double* ld, Eigen::MatrixXd* inv) {
  if (a.rows() == 1) {
    if (!(a(0, 0) > 0.0)) return false;
    *ld = std::log(a(0, 0));
    if (inv) *inv = Eigen::MatrixXd::Constant(1, 1, 1.0 / a(0, 0));
    return true;
  }
  Eig e = Decompose(a);
  if (!(e.values(0) > 0.0)) return false;
  *ld = e.values.array().log().sum();
  if (inv) {
    *inv = e.vectors * e.values.cwiseInverse().asDiagonal() * e.vectors.transpose();
  }
  return true;
}

Eigen::MatrixXd PositivePart(const Eigen::MatrixXd& a) {
  if (a.rows() == 1) return Eigen::MatrixXd::Constant(1, 1, std::max(0.0, a(0, 0)));
  Eig e = Decompose(a);
  return e.vectors * e.values.cwiseMax(0.0).asDiagonal() * e.vectors.transpose();
}

}  // namespace

TangentObjective::TangentObjective(TangentKind kind, const GeneralCeoInstance& inst,
                                   const DistortionTarget& target, const WeightVector& mu)
    : kind_(kind),
      h_(inst.channels()),
      kx_inv_(inst.kx_inv().matrix()),
      d_half_(sym_sqrt(target.d()).matrix()),
      logdet_kx_(inst.logdet_kx()),
      logdet_d_(target.logdet()),
      mu_(mu.values()) {
  const int n = inst.num_sensors();
  require_same_dim(inst.kx(), target.d(), "distortion target");
  if (mu.size() != n) {
    throw CeoError(ErrorCode::kWrongSensorCount, "weights do not match sensor count");
  }
  if (kind == TangentKind::kChenWang && n != 2) {
    throw CeoError(ErrorCode::kWrongSensorCount,
                   "the Chen-Wang bound is defined for two sensors only");
  }
  const std::vector<int> order = mu.DescendingOrder();
  for (int k = 0; k + 1 < n; ++k) {
    const double c = mu[order[k]] - mu[order[k + 1]];
    if (c <= 0.0) continue;
    uint32_t bits = 0;
    for (int j = k + 1; j < n; ++j) bits |= 1u << order[j];
    coef_.push_back(c);
    tails_.push_back(bits);
  }
  last_weight_ = mu[order[n - 1]];
}

Eigen::MatrixXd TangentObjective::Constraint(const Point& e) const {
  Eigen::MatrixXd p = kx_inv_;
  for (int l = 0; l < num_sensors(); ++l) {
    const int r = rows(l);
    p += h_[l].transpose() * (Eigen::MatrixXd::Identity(r, r) - e[l]) * h_[l];
  }
  Eigen::MatrixXd g = d_half_ * p * d_half_;
  g.diagonal().array() -= 1.0;
  return 0.5 * (g + g.transpose());
}

double TangentObjective::ConstraintMargin(const Point& e) const {
  return Decompose(Constraint(e)).values(0);
}

double TangentObjective::Evaluate(const Point& e, const Multiplier* al,
                                  Point* grad) const {
  const int n = num_sensors();
  const int m = dim();
  if (grad) {
    grad->resize(n);
    for (int l = 0; l < n; ++l) (*grad)[l] = Eigen::MatrixXd::Zero(rows(l), rows(l));
  }
  double value = 0.0;

  // Sensor terms -mu_l/2 logdet E_l.
  for (int l = 0; l < n; ++l) {
    if (mu_[l] <= 0.0) continue;
    double ld;
    Eigen::MatrixXd inv;
    if (!LogdetInverse(e[l], &ld, grad ? &inv : nullptr)) return kInf;
    value -= 0.5 * mu_[l] * ld;
    if (grad) (*grad)[l] -= 0.5 * mu_[l] * inv;
  }

  std::vector<Eigen::MatrixXd> q(n);
  for (int l = 0; l < n; ++l) {
    const int r = rows(l);
    q[l] = h_[l].transpose() * (Eigen::MatrixXd::Identity(r, r) - e[l]) * h_[l];
  }
  auto precision = [&](uint32_t bits) {
    Eigen::MatrixXd p = kx_inv_;
    for (int l = 0; l < n; ++l) {
      if ((bits >> l) & 1u) p += q[l];
    }
    return p;
  };
  // Adds w * H_l A H_l^T to the gradient of every sensor in `bits`.
  auto add_grad = [&](uint32_t bits, double w, const Eigen::MatrixXd& a) {
    if (!grad) return;
    for (int l = 0; l < n; ++l) {
      if ((bits >> l) & 1u) (*grad)[l] += w * (h_[l] * a * h_[l].transpose());
    }
  };

  const uint32_t all = n >= 32 ? ~0u : (1u << n) - 1u;
  const bool need_all = kind_ == TangentKind::kInner || al != nullptr;
  Eigen::MatrixXd p_all, p_all_inv;
  double ld_all = 0.0;
  if (need_all) {
    p_all = precision(all);
    if (!LogdetInverse(p_all, &ld_all, &p_all_inv)) return kInf;
  }

  // Reference log-determinant subtracted inside each difference term.
  const double ref = kind_ == TangentKind::kInner ? -ld_all : logdet_d_;
  for (size_t k = 0; k < coef_.size(); ++k) {
    const double c = coef_[k];
    double ld;
    Eigen::MatrixXd inv;
    if (!LogdetInverse(precision(tails_[k]), &ld, &inv)) return kInf;
    const double x = -ld - ref;
    double slope = 1.0;
    if (kind_ == TangentKind::kOuter && al && al->tau > 0.0) {
      const double z = std::exp(-std::abs(x) / al->tau);
      value += 0.5 * c * (std::max(x, 0.0) + al->tau * std::log1p(z));
      slope = x > 0.0 ? 1.0 / (1.0 + z) : z / (1.0 + z);
    } else {
      if (kind_ == TangentKind::kOuter && x <= 0.0) continue;
      value += 0.5 * c * x;
    }
    add_grad(tails_[k], 0.5 * c * slope, inv);
    if (kind_ == TangentKind::kInner) add_grad(all, -0.5 * c, p_all_inv);
  }
  if (last_weight_ > 0.0) {
    value += 0.5 * last_weight_ * (logdet_kx_ - ref);
    if (kind_ == TangentKind::kInner) add_grad(all, -0.5 * last_weight_, p_all_inv);
  }

  if (al) {
    Eigen::MatrixXd g = d_half_ * p_all * d_half_;
    g.diagonal().array() -= 1.0;
    g = 0.5 * (g + g.transpose());
    const Eigen::MatrixXd lambda =
        al->lambda.size() ? al->lambda : Eigen::MatrixXd::Zero(m, m);
    const Eigen::MatrixXd w = PositivePart(lambda - al->rho * g);
    value += (w.squaredNorm() - lambda.squaredNorm()) / (2.0 * al->rho);
    add_grad(all, 1.0, d_half_ * w * d_half_);
  }
  return value;
}

void ProjectUnitBox(Point* e) {
  for (auto& block : *e) {
    if (block.rows() == 1) {
      block(0, 0) = std::clamp(block(0, 0), 0.0, 1.0);
      continue;
    }
    Eig s = Decompose(0.5 * (block + block.transpose()));
    Eigen::VectorXd v = s.values.cwiseMax(0.0).cwiseMin(1.0);
    block = s.vectors * v.asDiagonal() * s.vectors.transpose();
    block = 0.5 * (block + block.transpose());
  }
}

}  // namespace ceo
