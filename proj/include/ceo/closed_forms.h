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

// Closed-form tangent values for two-sensor instances under the separation
// assumptions, with the allocations that attain them.
//
// Sensor labels follow the weights: if mu_1 < mu_2 the two sensors swap
// roles before any formula is applied. Witness allocations are always
// returned in the caller's original sensor order.

#ifndef CEO_CLOSED_FORMS_H_
#define CEO_CLOSED_FORMS_H_

#include <string>
#include <vector>

#include "ceo/bounds.h"
#include "ceo/model.h"

namespace ceo {

// One strict inequality lhs < rhs. For matrices, `margin` is
// lambda_min(rhs - lhs) and lhs/rhs hold the scalar values only when M = 1
// (NaN otherwise). An infinite lhs (mu_1 = mu_2) gives margin -infinity.
struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool holds = false;
};

struct AssumptionReport {
  std::vector<InequalityCheck> checks;
  bool swapped = false;  // sensors relabelled so that mu_1 >= mu_2
  bool all_hold() const;
  std::string Describe() const;
};

// Vector Chen-Wang separation: three strict matrix inequalities
//   (mu2/mu1) Sigma_1^{-1}     < K^{-1} + Sigma_2^{-1} - D^{-1}
//   mu2/(mu1-mu2) K^{-1}       < Sigma_2^{-1}
//   mu1/(mu1-mu2) D^{-1}       < K^{-1} + Sigma_2^{-1}
AssumptionReport check_gap_assumptions(const CeoInstance& inst,
                                       const DistortionTarget& target,
                                       const WeightVector& mu);

// Outer-bound tangent value T+ in closed form. Throws kAssumptionsViolated.
double corollary3_tplus(const CeoInstance& inst, const DistortionTarget& target,
                        const WeightVector& mu);
// D_1 = Sigma_1, D_2 = Sigma_2 (K^{-1} + Sigma_2^{-1} - D^{-1}) Sigma_2.
Allocation corollary3_witness(const CeoInstance& inst, const DistortionTarget& target,
                              const WeightVector& mu);

// Upper bound on the Chen-Wang tangent value T-; strictly below T+.
double corollary4_tminus_upper(const CeoInstance& inst, const DistortionTarget& target,
                               const WeightVector& mu);
// D_1 = Sigma_1, D_2 = (mu2/mu1) Sigma_2 (K^{-1} + Sigma_2^{-1}) Sigma_2.
Allocation corollary4_witness(const CeoInstance& inst, const DistortionTarget& target,
                              const WeightVector& mu);

// Parallel L = M = 2 separation: the three scalar analogues above on
// component 2 plus
//   (1/D_1)(1/s_1 + 1/s_21)^{-1} > ((mu1-mu2)/mu1) D_2 (1/s_2 + 1/s_22).
AssumptionReport check_parallel_assumptions(const ParallelCeoInstance& inst,
                                            const WeightVector& mu);

using ParallelAllocation = std::vector<std::vector<double>>;  // L x M

struct ParallelClosedForm {
  double value = 0.0;
  double f1_min = 0.0;
  double d11 = 0.0, d21 = 0.0;  // minimizer of f1, original sensor order
  ParallelAllocation witness;
};

// Component-1 objective f1(D11, D21) (oriented sensor labels). Returns
// +infinity outside the open box.
double parallel_f1(const ParallelCeoInstance& inst, const WeightVector& mu, double d11,
                   double d21);

// Exact tangent value T^p of the parallel region.
ParallelClosedForm corollary5_parallel_tp(const ParallelCeoInstance& inst,
                                          const WeightVector& mu);
// Upper bound on the outer-bound tangent value; strictly below T^p.
ParallelClosedForm corollary6_tplus_upper(const ParallelCeoInstance& inst,
                                          const WeightVector& mu);

}  // namespace ceo

#endif  // CEO_CLOSED_FORMS_H_
