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

// Runnable checks: the two strict-separation demos, the supermodularity and
// dominance suites, the channel-enhancement limit, and the random samplers
// they share with the tests.

#ifndef CEO_VERIFY_H_
#define CEO_VERIFY_H_

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ceo/bounds.h"
#include "ceo/closed_forms.h"
#include "ceo/model.h"
#include "ceo/optimize.h"

namespace ceo {

// Agreement required between a closed form and its witness evaluation.
inline constexpr double kWitnessTol = 1e-10;

struct DemoReport {
  std::string name;
  // Distortion limits, then the separation assumptions.
  std::vector<InequalityCheck> limits;
  AssumptionReport assumptions;
  std::vector<std::pair<std::string, double>> quantities;
  // Independent recomputations; each must agree before a conclusion is drawn.
  std::vector<InequalityCheck> cross_checks;
  std::vector<std::string> notes;
  bool conclusion = false;

  double Quantity(const std::string& key) const;
};

// K_X = Sigma_1 = Sigma_2 = scale (1x1), mu = (mu_ratio, 1), D = d * scale.
// Shows T- (upper bound) < T+.
DemoReport demo_gap(double scale, double mu_ratio, double d,
                    const OptimizerOptions& opts = {});

// sigma_m^2 = sigma_lm^2 = sigma^2, D_1 = d1_frac sigma^2, D_2 = d2_frac sigma^2,
// mu = (mu_ratio, 1). Shows T+ (upper bound) < T^p.
DemoReport demo_parallel(double sigma, double d1_frac, double d2_frac, double mu_ratio,
                         const GridOptions& gopts = {});

struct SupermodularityReport {
  bool ok = false;
  double worst = 0.0;  // most negative slack over all checked inequalities
  int checked = 0;
};

// Exhaustive check of f({}) = 0, monotonicity and supermodularity of the
// outer-bound set function. Requires L <= max_l <= 4.
SupermodularityReport check_supermodularity(const CeoInstance& inst,
                                            const DistortionTarget& target,
                                            const Allocation& alloc, int max_l = 4);

struct DominanceReport {
  bool ok = false;
  double worst_subset = 0.0;   // min over inner - outer subset bounds
  double worst_tangent = 0.0;  // min over inner - outer and outer - chen-wang
  int trials = 0;
};

// Random feasible allocations and weights: inner >= outer >= 0 per subset,
// chen-wang <= outer <= inner for tangents (chen-wang only when L = 2).
DominanceReport check_dominance(const CeoInstance& inst, const DistortionTarget& target,
                                int trials, uint64_t seed);

struct EnhancementReport {
  std::vector<double> alphas;
  std::vector<double> distances;
  bool monotone = false;  // strictly decreasing distances
  bool converged = false;
};

// H_{l,alpha} = U_l (Lambda_l + alpha I) V_l^T from the full SVD of H_l;
// distance is the spectral norm between the inverse effective precisions over
// the complement of `subset` with and without enhancement.
EnhancementReport enhancement_probe(const GeneralCeoInstance& inst,
                                    const Allocation& alloc, SubsetId subset,
                                    const std::vector<double>& alphas);

// -- Samplers -----------------------------------------------------------------

using Rng = std::mt19937_64;

SymMatrix random_pd(int dim, Rng& rng, double min_eig = 0.2, double max_eig = 3.0);
CeoInstance random_instance(int num_sensors, int dim, Rng& rng);
// D = mmse + theta (K_X - mmse), theta in (0.1, 0.9).
DistortionTarget random_target(const CeoInstance& inst, Rng& rng);
// Random E_l in [0, I], shrunk by u * t_max with u in [0.3, 1], where t_max
// is the largest feasible uniform scaling; mapped to the aligned frame.
Allocation random_feasible_allocation(const CeoInstance& inst,
                                      const DistortionTarget& target, Rng& rng);
WeightVector random_weights(int num_sensors, Rng& rng);

}  // namespace ceo

#endif  // CEO_VERIFY_H_
