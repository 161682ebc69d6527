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

#include "ceo/model.h"

#include <cmath>
#include <sstream>
#include <utility>

namespace ceo {

namespace {

void RequirePd(const SymMatrix& m, const std::string& what) {
  try {
    (void)logdet(m);
  } catch (const CeoError&) {
    throw CeoError(ErrorCode::kNotPositiveDefinite, what + " is not positive definite");
  }
}

DistortionValidation Validate(const SymMatrix& kx, const SymMatrix& limit,
                              const DistortionTarget& target, bool check_upper) {
  require_same_dim(kx, target.d(), "distortion target");
  DistortionValidation v;
  v.lower_limit = limit;
  v.upper_checked = check_upper;
  v.lower_ok = psd_leq(limit, target.d(), kValidationTol);
  v.upper_ok = psd_leq(target.d(), kx, kValidationTol);
  v.lower_margin = (target.d() - limit).MinEigenvalue();
  v.upper_margin = (kx - target.d()).MinEigenvalue();
  return v;
}

}  // namespace

CeoInstance::CeoInstance(SymMatrix kx, std::vector<SymMatrix> noises)
    : kx_(std::move(kx)), noises_(std::move(noises)) {
  if (noises_.empty()) {
    throw CeoError(ErrorCode::kInvalidInstance, "need at least one sensor");
  }
  RequirePd(kx_, "K_X");
  kx_inv_ = inverse(kx_);
  logdet_kx_ = logdet(kx_);
  for (size_t l = 0; l < noises_.size(); ++l) {
    require_same_dim(kx_, noises_[l], "noise covariance");
    RequirePd(noises_[l], "noise covariance " + std::to_string(l + 1));
    noise_inv_.push_back(inverse(noises_[l]));
    noise_inv_sqrt_.push_back(inv_sqrt(noises_[l]));
    logdet_noise_.push_back(logdet(noises_[l]));
  }
}

GeneralCeoInstance::GeneralCeoInstance(SymMatrix kx, std::vector<GenMatrix> channels)
    : kx_(std::move(kx)), channels_(std::move(channels)) {
  if (channels_.empty()) {
    throw CeoError(ErrorCode::kInvalidInstance, "need at least one sensor");
  }
  RequirePd(kx_, "K_X");
  kx_inv_ = inverse(kx_);
  logdet_kx_ = logdet(kx_);
  for (size_t l = 0; l < channels_.size(); ++l) {
    if (channels_[l].cols() != kx_.dim() || channels_[l].rows() < 1) {
      throw CeoError(ErrorCode::kDimensionMismatch,
                     "channel " + std::to_string(l + 1) + " must have " +
                         std::to_string(kx_.dim()) + " columns");
    }
    if (!channels_[l].allFinite()) {
      throw CeoError(ErrorCode::kInvalidInstance, "channel has non-finite entries");
    }
  }
}

DistortionTarget::DistortionTarget(SymMatrix d) : d_(std::move(d)) {
  RequirePd(d_, "distortion D");
  d_inv_ = inverse(d_);
  logdet_ = ceo::logdet(d_);
}

void ScalarCeoInstance::Validate() const {
  if (noise_vars.empty()) {
    throw CeoError(ErrorCode::kInvalidInstance, "need at least one sensor");
  }
  if (!(var_x > 0.0) || !std::isfinite(var_x)) {
    throw CeoError(ErrorCode::kInvalidInstance, "source variance must be positive");
  }
  for (double v : noise_vars) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw CeoError(ErrorCode::kInvalidInstance, "noise variances must be positive");
    }
  }
}

CeoInstance ScalarCeoInstance::ToMatrix() const {
  Validate();
  std::vector<SymMatrix> noises;
  for (double v : noise_vars) noises.push_back(SymMatrix::Scalar(v));
  return CeoInstance(SymMatrix::Scalar(var_x), std::move(noises));
}

double ScalarCeoInstance::MinDistortion() const {
  double precision = 1.0 / var_x;
  for (double v : noise_vars) precision += 1.0 / v;
  return 1.0 / precision;
}

void ParallelCeoInstance::Validate() const {
  const size_t m = source_vars.size();
  if (m == 0 || noise_vars.empty()) {
    throw CeoError(ErrorCode::kInvalidInstance, "parallel model needs M >= 1 and L >= 1");
  }
  if (targets.size() != m) {
    throw CeoError(ErrorCode::kDimensionMismatch, "need one distortion per component");
  }
  for (const auto& row : noise_vars) {
    if (row.size() != m) {
      throw CeoError(ErrorCode::kDimensionMismatch, "noise_vars must be L x M");
    }
  }
  for (size_t c = 0; c < m; ++c) {
    ScalarCeoInstance comp = Component(static_cast<int>(c));
    comp.Validate();
    const double lo = comp.MinDistortion();
    const double hi = source_vars[c];
    const double slack = kValidationTol * std::max(1.0, hi);
    if (!(targets[c] >= lo - slack && targets[c] <= hi + slack)) {
      std::ostringstream os;
      os << "distortion D_" << c + 1 << " = " << targets[c] << " outside [" << lo
         << ", " << hi << "]";
      throw CeoError(ErrorCode::kInvalidInstance, os.str());
    }
  }
}

ScalarCeoInstance ParallelCeoInstance::Component(int m) const {
  ScalarCeoInstance s;
  s.var_x = source_vars.at(m);
  for (const auto& row : noise_vars) s.noise_vars.push_back(row.at(m));
  return s;
}

CeoInstance ParallelCeoInstance::ToMatrix() const {
  std::vector<SymMatrix> noises;
  for (const auto& row : noise_vars) noises.push_back(SymMatrix::Diagonal(row));
  return CeoInstance(SymMatrix::Diagonal(source_vars), std::move(noises));
}

DistortionTarget ParallelCeoInstance::TargetMatrix() const {
  return DistortionTarget(SymMatrix::Diagonal(targets));
}

std::string DistortionValidation::Describe() const {
  std::ostringstream os;
  if (ok()) {
    os << "ok";
  } else {
    if (!lower_ok) {
      os << "lower limit violated: D - (K_X^-1 + sum Sigma^-1)^-1 has min eigenvalue "
         << lower_margin;
    }
    if (upper_checked && !upper_ok) {
      if (!lower_ok) os << "; ";
      os << "upper limit violated: K_X - D has min eigenvalue " << upper_margin;
    }
  }
  return os.str();
}

SymMatrix collective_mmse(const CeoInstance& inst) {
  SymMatrix precision = inst.kx_inv();
  for (int l = 0; l < inst.num_sensors(); ++l) precision = precision + inst.noise_inv(l);
  return inverse(precision);
}

SymMatrix collective_mmse(const GeneralCeoInstance& inst) {
  Eigen::MatrixXd precision = inst.kx_inv().matrix();
  for (const auto& h : inst.channels()) precision += h.transpose() * h;
  return inverse(SymMatrix::SymmetricPart(precision));
}

DistortionValidation validate_distortion(const CeoInstance& inst,
                                         const DistortionTarget& target,
                                         bool check_upper) {
  return Validate(inst.kx(), collective_mmse(inst), target, check_upper);
}

DistortionValidation validate_general_distortion(const GeneralCeoInstance& inst,
                                                 const DistortionTarget& target,
                                                 bool check_upper) {
  return Validate(inst.kx(), collective_mmse(inst), target, check_upper);
}

GeneralCeoInstance align_to_general(const CeoInstance& inst) {
  std::vector<GenMatrix> channels;
  for (int l = 0; l < inst.num_sensors(); ++l) {
    channels.push_back(sym_sqrt(inverse(inst.noise(l))).matrix());
  }
  return GeneralCeoInstance(inst.kx(), std::move(channels));
}

}  // namespace ceo
