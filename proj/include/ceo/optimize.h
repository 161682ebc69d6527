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

// Minimization of the tangent objectives over allocations.
//
//  - minimize_tangent: multi-start projected gradient in the whitened box
//    [0, I], coupling constraint via an augmented Lagrangian, feasibility
//    restored and certified afterwards.
//  - grid_oracle: brute-force ground truth for diagonal instances with at
//    most four scalar unknowns. Uses its own evaluator.
//  - scalar_solve: exact solver for the scalar model on the manifold where
//    the distortion constraint holds with equality.

#ifndef CEO_OPTIMIZE_H_
#define CEO_OPTIMIZE_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "ceo/bounds.h"
#include "ceo/model.h"

namespace ceo {

struct OptimizerOptions {
  int starts = 16;
  int max_iters = 2000;       // projected-gradient iterations per start
  double step_init = 0.1;
  double tol_obj = 1e-9;
  double penalty_init = 10.0;
  double penalty_max = 1e6;
  uint64_t seed = 42;
  // Worker threads for the starts; 0 reads CEO_REGION_THREADS (default 1).
  int threads = 0;

  // Throws kInvalidArgument unless every field is positive.
  void Validate() const;
};

struct GridOptions {
  int resolution = 41;     // points per scalar unknown
  int refine_levels = 30;  // zoom passes around the incumbent
  // Each pass keeps max(2 cells, zoom * previous half-width) around the
  // incumbent. A slow zoom lets the incumbent slide along a constraint
  // surface instead of freezing at the first coarse hit.
  double zoom = 0.5;

  void Validate() const;
};

// Fills value, feasibility, per-subset bounds and (for the outer kind) the
// vertex at `alloc` using the library evaluators.
BoundReport make_report(TangentKind kind, const CeoInstance& inst,
                        const DistortionTarget& target, const WeightVector& mu,
                        Allocation alloc);
BoundReport make_report(TangentKind kind, const GeneralCeoInstance& inst,
                        const DistortionTarget& target, const WeightVector& mu,
                        Allocation alloc);

// Throws kInfeasible if the coupling constraint cannot be met at all (the
// target lies below the collective MMSE).
BoundReport minimize_tangent(TangentKind kind, const CeoInstance& inst,
                             const DistortionTarget& target, const WeightVector& mu,
                             const OptimizerOptions& opts = {},
                             const std::optional<Allocation>& warm_start = std::nullopt);
BoundReport minimize_tangent(TangentKind kind, const GeneralCeoInstance& inst,
                             const DistortionTarget& target, const WeightVector& mu,
                             const OptimizerOptions& opts = {},
                             const std::optional<Allocation>& warm_start = std::nullopt);

// Requires diagonal K_X, Sigma_l and D, and L * M <= 4
// (kTooManyDegreesOfFreedom otherwise). Cost is resolution^(L*M) per level.
BoundReport grid_oracle(TangentKind kind, const CeoInstance& inst,
                        const DistortionTarget& target, const WeightVector& mu,
                        const GridOptions& gopts = {});

BoundReport scalar_solve(const ScalarCeoInstance& inst, double d, const WeightVector& mu);

struct TraceRow {
  std::vector<double> mu;
  BoundReport report;
};

// One minimize_tangent per weight vector, warm-started from the previous
// optimum.
std::vector<TraceRow> trace_region(TangentKind kind, const CeoInstance& inst,
                                   const DistortionTarget& target,
                                   const std::vector<WeightVector>& mu_list,
                                   const OptimizerOptions& opts = {});
std::vector<TraceRow> trace_region(TangentKind kind, const GeneralCeoInstance& inst,
                                   const DistortionTarget& target,
                                   const std::vector<WeightVector>& mu_list,
                                   const OptimizerOptions& opts = {});

}  // namespace ceo

#endif  // CEO_OPTIMIZE_H_
