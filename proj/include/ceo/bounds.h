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

// Pure evaluators for the inner and outer rate bounds of the Gaussian CEO
// problem, their tangent-hyperplane forms, and the contra-polymatroid set
// function behind the outer bound.
//
// All rates are in nats. A singular D_l for a sensor that carries positive
// weight makes the corresponding rate infinite; evaluators return
// kInfiniteRate (IEEE +infinity) in that case and never a large finite value.
//
// Notation used below, for a sensor subset S:
//   P(S) = K_X^{-1} + sum_{l in S} Sigma_l^{-1} (Sigma_l - D_l) Sigma_l^{-1}
// is the effective precision. P(S)^{-1} lower-bounds the conditional
// covariance of the source given the descriptions of the sensors in S.

#ifndef CEO_BOUNDS_H_
#define CEO_BOUNDS_H_

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "ceo/matkernel.h"
#include "ceo/model.h"

namespace ceo {

inline constexpr double kInfiniteRate = std::numeric_limits<double>::infinity();
// Tolerance for allocation box and distortion-coupling checks.
inline constexpr double kFeasibilityTol = 1e-9;
// Strictness margin for the assumption checkers.
inline constexpr double kStrictMargin = 1e-9;

enum class TangentKind { kOuter, kInner, kChenWang };
enum class BoundKind { kOuter, kInner };

std::string_view TangentKindName(TangentKind kind);

// Aligned allocations satisfy 0 <= D_l <= Sigma_l; general ones 0 <= D_l <= I.
enum class Frame { kAligned, kGeneral };

struct Allocation {
  std::vector<SymMatrix> mats;
  Frame frame = Frame::kAligned;

  int size() const { return static_cast<int>(mats.size()); }
  const SymMatrix& operator[](int l) const { return mats[l]; }
};

// Tangent weights mu_1..mu_L: non-negative, at least one positive.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> mu);

  int size() const { return static_cast<int>(mu_.size()); }
  double operator[](int l) const { return mu_[l]; }
  const std::vector<double>& values() const { return mu_; }
  // Sensor indices sorted by decreasing weight; ties keep index order.
  std::vector<int> DescendingOrder() const;

 private:
  std::vector<double> mu_;
};

// Subset of {0, ..., L-1} as a bitmask (sensor l <-> bit l).
class SubsetId {
 public:
  constexpr SubsetId() = default;
  constexpr explicit SubsetId(uint32_t bits) : bits_(bits) {}
  static SubsetId Full(int num_sensors) {
    return SubsetId(num_sensors >= 32 ? ~0u : (1u << num_sensors) - 1u);
  }
  static SubsetId Of(std::initializer_list<int> members);

  uint32_t bits() const { return bits_; }
  bool empty() const { return bits_ == 0; }
  bool contains(int l) const { return (bits_ >> l) & 1u; }
  int size() const;
  SubsetId With(int l) const { return SubsetId(bits_ | (1u << l)); }
  SubsetId Complement(int num_sensors) const {
    return SubsetId(~bits_ & Full(num_sensors).bits_);
  }
  SubsetId operator|(SubsetId o) const { return SubsetId(bits_ | o.bits_); }
  SubsetId operator&(SubsetId o) const { return SubsetId(bits_ & o.bits_); }
  bool operator==(const SubsetId&) const = default;
  auto operator<=>(const SubsetId&) const = default;
  // "{1,3}" with 1-based sensor labels.
  std::string ToString(int num_sensors) const;

 private:
  uint32_t bits_ = 0;
};

struct Feasibility {
  bool ok = false;
  // Largest violation across the box and coupling constraints, measured as
  // the most negative eigenvalue of the relevant difference (0 if none).
  double max_violation = 0.0;
};

struct BoundReport {
  TangentKind kind = TangentKind::kOuter;
  double value = 0.0;
  Allocation allocation;
  Feasibility feasibility;
  // Per-subset sum-rate lower bounds (outer or inner, matching `kind`) at
  // `allocation`, keyed by subset bitmask.
  std::map<uint32_t, double> per_subset;
  // Vertex of the region selected by the tangent weights.
  std::vector<double> vertex;
};

// -- Aligned model ----------------------------------------------------------

SymMatrix effective_precision(const CeoInstance& inst, const Allocation& alloc,
                              SubsetId subset);

// Outer-bound sum-rate constraint for sensors in `subset`:
//   1/2 log+ (|P(S^c)^{-1}| / |D|) + sum_{l in S} 1/2 log(|Sigma_l| / |D_l|).
double outer_subset_bound(const CeoInstance& inst, const Allocation& alloc,
                          const DistortionTarget& target, SubsetId subset);

// Inner-bound (Berger-Tung evaluated with Gaussian auxiliaries) constraint:
//   1/2 log(|P(S^c)^{-1}| / |P(all)^{-1}|) + sum_{l in S} 1/2 log(|Sigma_l| / |D_l|).
double inner_subset_bound(const CeoInstance& inst, const Allocation& alloc,
                          SubsetId subset);

// P(all)^{-1} <= D and 0 <= D_l <= Sigma_l.
Feasibility alloc_feasible(const CeoInstance& inst, const Allocation& alloc,
                           const DistortionTarget& target);

// f(S) = max(0, 1/2 log(|P(S^c)^{-1}| / |D|)); supermodular with f({}) = 0
// on feasible allocations.
double set_function(const CeoInstance& inst, const Allocation& alloc,
                    const DistortionTarget& target, SubsetId subset);

// Vertex of the outer-bound polytope for the given sensor order (greedy
// increments of f, shifted by the per-sensor terms). Returned indexed by
// sensor, not by position in `order`.
std::vector<double> vertex_rates(const CeoInstance& inst, const Allocation& alloc,
                                 const DistortionTarget& target,
                                 const std::vector<int>& order);

// Weighted sum-rate minimum over the outer bound at a fixed allocation:
//   sum_{k<L} (mu_k - mu_{k+1})/2 log+ (|P({k+1..L})^{-1}| / |D|)
//   + sum_l mu_l/2 log(|Sigma_l| / |D_l|) + mu_L/2 log(|K_X| / |D|)
// with sensors relabelled so that mu is non-increasing.
double outer_tangent_value(const CeoInstance& inst, const Allocation& alloc,
                           const DistortionTarget& target, const WeightVector& mu);

// Inner-bound counterpart: the log+ ratio's denominator |D| becomes
// |P(all)^{-1}|, and so does the last term's.
double inner_tangent_value(const CeoInstance& inst, const Allocation& alloc,
                           const DistortionTarget& target, const WeightVector& mu);

// Two-sensor outer bound of Chen and Wang: outer_tangent_value with plain
// log in place of log+. Throws kWrongSensorCount unless L == 2.
double chen_wang_tangent_value(const CeoInstance& inst, const Allocation& alloc,
                               const DistortionTarget& target, const WeightVector& mu);

double tangent_value(TangentKind kind, const CeoInstance& inst, const Allocation& alloc,
                     const DistortionTarget& target, const WeightVector& mu);

// -- General model (Y_l = H_l X + N_l, N_l ~ N(0, I)) -------------------------

// K_X^{-1} + sum_{l in S} H_l^T (I - D_l) H_l.
SymMatrix general_effective_precision(const GeneralCeoInstance& inst,
                                      const Allocation& alloc, SubsetId subset);

double general_subset_bound(const GeneralCeoInstance& inst, const Allocation& alloc,
                            const DistortionTarget& target, SubsetId subset,
                            BoundKind kind);

Feasibility general_alloc_feasible(const GeneralCeoInstance& inst,
                                   const Allocation& alloc,
                                   const DistortionTarget& target);

double general_tangent_value(TangentKind kind, const GeneralCeoInstance& inst,
                             const Allocation& alloc, const DistortionTarget& target,
                             const WeightVector& mu);

// Maps aligned D_l to Sigma_l^{-1/2} D_l Sigma_l^{-1/2} and back.
Allocation whiten_allocation(const CeoInstance& inst, const Allocation& alloc);
Allocation unwhiten_allocation(const CeoInstance& inst, const Allocation& alloc);

// -- Scalar and parallel models ----------------------------------------------

// Scalar specialization of outer_subset_bound.
double scalar_subset_bound(const ScalarCeoInstance& inst, double d,
                           const std::vector<double>& d_alloc, SubsetId subset);

// Exact region of the parallel model: sum over components of the scalar
// bound, valid only on allocations meeting every per-component distortion
// constraint with equality (kConstraintNotSaturated otherwise).
// d_alloc is L x M.
double parallel_subset_bound(const ParallelCeoInstance& inst,
                             const std::vector<std::vector<double>>& d_alloc,
                             SubsetId subset);

}  // namespace ceo

#endif  // CEO_BOUNDS_H_
