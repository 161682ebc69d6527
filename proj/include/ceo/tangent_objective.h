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

// Tangent objectives in the general (whitened) frame, where every sensor
// variable E_l lives in the box [0, I]. Aligned instances enter through
// align_to_general, under which E_l = Sigma_l^{-1/2} D_l Sigma_l^{-1/2}.
//
// Works on raw Eigen matrices: this is the optimizer's inner loop.

#ifndef CEO_TANGENT_OBJECTIVE_H_
#define CEO_TANGENT_OBJECTIVE_H_

#include <vector>

#include <Eigen/Dense>

#include "ceo/bounds.h"
#include "ceo/model.h"

namespace ceo {

using Point = std::vector<Eigen::MatrixXd>;

// Augmented-Lagrangian state for the coupling constraint
// G(E) = D^{1/2} P(all) D^{1/2} - I >= 0.
// Per-start solver state for the penalized objective.
struct Multiplier {
  Eigen::MatrixXd lambda;  // PSD, M x M
  double rho = 10.0;
  // When positive, the outer kind's log+ is replaced by the softplus
  // tau * log(1 + exp(x / tau)), which overestimates it by at most tau ln 2.
  double tau = 0.0;
};

class TangentObjective {
 public:
  TangentObjective(TangentKind kind, const GeneralCeoInstance& inst,
                   const DistortionTarget& target, const WeightVector& mu);

  int num_sensors() const { return static_cast<int>(h_.size()); }
  int dim() const { return static_cast<int>(kx_inv_.rows()); }
  int rows(int l) const { return static_cast<int>(h_[l].rows()); }
  TangentKind kind() const { return kind_; }

  // Tangent value at E; +infinity when a positively weighted E_l is
  // singular. With `al`, adds the augmented-Lagrangian penalty. With `grad`,
  // fills the gradient (symmetric, one block per sensor). At the log+ kink
  // the clipped branch's gradient (zero) is used unless al->tau > 0.
  double Evaluate(const Point& e, const Multiplier* al, Point* grad) const;

  // lambda_min(G(E)); non-negative iff the coupling constraint holds.
  double ConstraintMargin(const Point& e) const;
  // G(E) itself.
  Eigen::MatrixXd Constraint(const Point& e) const;

 private:
  TangentKind kind_;
  std::vector<Eigen::MatrixXd> h_;
  Eigen::MatrixXd kx_inv_;
  Eigen::MatrixXd d_half_;
  double logdet_kx_ = 0.0;
  double logdet_d_ = 0.0;
  std::vector<double> mu_;
  double last_weight_ = 0.0;
  // Active difference terms: weight c_k and the tail subset T_k.
  std::vector<double> coef_;
  std::vector<uint32_t> tails_;
};

// Clip each block's eigenvalues to [0, 1].
void ProjectUnitBox(Point* e);

}  // namespace ceo

#endif  // CEO_TANGENT_OBJECTIVE_H_
