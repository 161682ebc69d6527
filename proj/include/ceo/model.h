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

// Problem instances for the Gaussian CEO problem.
//
// Aligned model: sensor l observes Y_l = X + N_l with N_l ~ N(0, Sigma_l).
// General model: sensor l observes Y_l = H_l X + N_l with N_l ~ N(0, I).
// Scalar and parallel models are thin value types that embed into the
// aligned model (1x1 and diagonal matrices respectively).

#ifndef CEO_MODEL_H_
#define CEO_MODEL_H_

#include <string>
#include <vector>

#include "ceo/matkernel.h"

namespace ceo {

// Tolerance used for the two-sided distortion validity check.
inline constexpr double kValidationTol = 1e-9;

class CeoInstance {
 public:
  // Throws kInvalidInstance / kDimensionMismatch / kNotPositiveDefinite.
  CeoInstance(SymMatrix kx, std::vector<SymMatrix> noises);

  int dim() const { return kx_.dim(); }
  int num_sensors() const { return static_cast<int>(noises_.size()); }

  const SymMatrix& kx() const { return kx_; }
  const SymMatrix& kx_inv() const { return kx_inv_; }
  double logdet_kx() const { return logdet_kx_; }
  const std::vector<SymMatrix>& noises() const { return noises_; }
  const SymMatrix& noise(int l) const { return noises_[l]; }
  const SymMatrix& noise_inv(int l) const { return noise_inv_[l]; }
  // Sigma_l^{-1/2}; also the whitening channel of the equivalent general model.
  const SymMatrix& noise_inv_sqrt(int l) const { return noise_inv_sqrt_[l]; }
  double logdet_noise(int l) const { return logdet_noise_[l]; }

  bool operator==(const CeoInstance& o) const {
    return kx_ == o.kx_ && noises_ == o.noises_;
  }

 private:
  SymMatrix kx_, kx_inv_;
  double logdet_kx_ = 0.0;
  std::vector<SymMatrix> noises_, noise_inv_, noise_inv_sqrt_;
  std::vector<double> logdet_noise_;
};

class GeneralCeoInstance {
 public:
  // Channels are r_l x M; r_l may differ from M.
  GeneralCeoInstance(SymMatrix kx, std::vector<GenMatrix> channels);

  int dim() const { return kx_.dim(); }
  int num_sensors() const { return static_cast<int>(channels_.size()); }
  // Observation dimension r_l of sensor l.
  int rows(int l) const { return static_cast<int>(channels_[l].rows()); }

  const SymMatrix& kx() const { return kx_; }
  const SymMatrix& kx_inv() const { return kx_inv_; }
  double logdet_kx() const { return logdet_kx_; }
  const std::vector<GenMatrix>& channels() const { return channels_; }
  const GenMatrix& channel(int l) const { return channels_[l]; }

  bool operator==(const GeneralCeoInstance& o) const {
    return kx_ == o.kx_ && channels_ == o.channels_;
  }

 private:
  SymMatrix kx_, kx_inv_;
  double logdet_kx_ = 0.0;
  std::vector<GenMatrix> channels_;
};

// The distortion matrix D; positive definite.
class DistortionTarget {
 public:
  explicit DistortionTarget(SymMatrix d);

  const SymMatrix& d() const { return d_; }
  const SymMatrix& d_inv() const { return d_inv_; }
  double logdet() const { return logdet_; }
  int dim() const { return d_.dim(); }

  bool operator==(const DistortionTarget& o) const { return d_ == o.d_; }

 private:
  SymMatrix d_, d_inv_;
  double logdet_ = 0.0;
};

struct ScalarCeoInstance {
  double var_x = 1.0;
  std::vector<double> noise_vars;

  // Throws kInvalidInstance unless every variance is positive and L >= 1.
  void Validate() const;
  int num_sensors() const { return static_cast<int>(noise_vars.size()); }
  CeoInstance ToMatrix() const;
  // Lower distortion limit (1/var_x + sum 1/noise)^{-1}.
  double MinDistortion() const;

  bool operator==(const ScalarCeoInstance&) const = default;
};

struct ParallelCeoInstance {
  std::vector<double> source_vars;              // sigma_m^2, size M
  std::vector<std::vector<double>> noise_vars;  // sigma_{lm}^2, L x M
  std::vector<double> targets;                  // D_m, size M

  // Shapes, positivity, and the per-component limits
  // (1/sigma_m^2 + sum_l 1/sigma_{lm}^2)^{-1} <= D_m <= sigma_m^2.
  void Validate() const;
  int num_sensors() const { return static_cast<int>(noise_vars.size()); }
  int num_components() const { return static_cast<int>(source_vars.size()); }
  ScalarCeoInstance Component(int m) const;
  // Diagonal embedding into the aligned model.
  CeoInstance ToMatrix() const;
  DistortionTarget TargetMatrix() const;

  bool operator==(const ParallelCeoInstance&) const = default;
};

// Structured outcome of the two-sided distortion check
// mmse_limit <= D <= K_X. Margins are minimum eigenvalues of the gaps.
struct DistortionValidation {
  bool lower_ok = false;
  bool upper_ok = false;
  bool upper_checked = true;
  double lower_margin = 0.0;  // lambda_min(D - mmse_limit)
  double upper_margin = 0.0;  // lambda_min(K_X - D)
  SymMatrix lower_limit;

  bool ok() const { return lower_ok && (upper_ok || !upper_checked); }
  std::string Describe() const;
};

// (K_X^{-1} + sum_l Sigma_l^{-1})^{-1}: the MMSE with direct access to all
// observations.
SymMatrix collective_mmse(const CeoInstance& inst);
SymMatrix collective_mmse(const GeneralCeoInstance& inst);

DistortionValidation validate_distortion(const CeoInstance& inst,
                                         const DistortionTarget& target,
                                         bool check_upper = true);
DistortionValidation validate_general_distortion(const GeneralCeoInstance& inst,
                                                 const DistortionTarget& target,
                                                 bool check_upper = true);

// H_l = Sigma_l^{-1/2}. Aligned allocations D_l map to the general frame as
// Sigma_l^{-1/2} D_l Sigma_l^{-1/2}.
GeneralCeoInstance align_to_general(const CeoInstance& inst);

}  // namespace ceo

#endif  // CEO_MODEL_H_
