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

#include "ceo/matkernel.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ceo {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kNotPositiveSemiDefinite: return "NotPositiveSemiDefinite";
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidInstance: return "InvalidInstance";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kSingularAllocation: return "SingularAllocation";
    case ErrorCode::kWrongSensorCount: return "WrongSensorCount";
    case ErrorCode::kConstraintNotSaturated: return "ConstraintNotSaturated";
    case ErrorCode::kAssumptionsViolated: return "AssumptionsViolated";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kTooManyDegreesOfFreedom: return "TooManyDegreesOfFreedom";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

double MaxAbs(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Spectral scale used by every relative tolerance.
double Scale(const Eigen::VectorXd& eigenvalues) {
  double norm = eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
  return std::max(1.0, norm);
}

}  // namespace

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw CeoError(ErrorCode::kDimensionMismatch,
                   "symmetric matrix must be square with dim >= 1, got " +
                       std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) {
    throw CeoError(ErrorCode::kInvalidArgument, "matrix has non-finite entries");
  }
  double asym = MaxAbs(m - m.transpose());
  if (asym > kSymmetryRelTol * std::max(1.0, MaxAbs(m))) {
    throw CeoError(ErrorCode::kNotSymmetric,
                   "asymmetry " + std::to_string(asym) + " exceeds tolerance");
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::SymmetricPart(const Eigen::MatrixXd& m) {
  SymMatrix s;
  s.m_ = 0.5 * (m + m.transpose());
  return s;
}

SymMatrix SymMatrix::Identity(int n) {
  return SymmetricPart(Eigen::MatrixXd::Identity(n, n));
}

SymMatrix SymMatrix::Zero(int n) {
  return SymmetricPart(Eigen::MatrixXd::Zero(n, n));
}

SymMatrix SymMatrix::Diagonal(const std::vector<double>& diag) {
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(diag.data(), diag.size());
  return SymMatrix(Eigen::MatrixXd(d.asDiagonal()));
}

SymMatrix SymMatrix::Scalar(double value) {
  return SymMatrix(Eigen::MatrixXd::Constant(1, 1, value));
}

SymMatrix SymMatrix::FromRows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const int n = static_cast<int>(rows.size());
  Eigen::MatrixXd m(n, n);
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n) {
      throw CeoError(ErrorCode::kDimensionMismatch, "ragged row");
    }
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return SymMatrix(m);
}

bool SymMatrix::IsDiagonal() const {
  for (int i = 0; i < dim(); ++i) {
    for (int j = 0; j < dim(); ++j) {
      if (i != j && m_(i, j) != 0.0) return false;
    }
  }
  return true;
}

SymMatrix::Spectrum SymMatrix::Decompose() const {
  if (dim() == 1) {
    return {Eigen::VectorXd::Constant(1, m_(0, 0)), Eigen::MatrixXd::Ones(1, 1)};
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m_);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double SymMatrix::MinEigenvalue() const {
  if (dim() == 1) return m_(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

double SymMatrix::SpectralNorm() const {
  if (dim() == 1) return std::abs(m_(0, 0));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

SymMatrix SymMatrix::operator+(const SymMatrix& o) const {
  require_same_dim(*this, o, "operator+");
  return SymmetricPart(m_ + o.m_);
}

SymMatrix SymMatrix::operator-(const SymMatrix& o) const {
  require_same_dim(*this, o, "operator-");
  return SymmetricPart(m_ - o.m_);
}

SymMatrix SymMatrix::operator-() const { return SymmetricPart(-m_); }

SymMatrix SymMatrix::operator*(double s) const { return SymmetricPart(m_ * s); }

SymMatrix SymMatrix::Congruence(const GenMatrix& b) const {
  if (b.rows() != dim()) {
    throw CeoError(ErrorCode::kDimensionMismatch, "congruence shape mismatch");
  }
  return SymmetricPart(b.transpose() * m_ * b);
}

void require_same_dim(const SymMatrix& a, const SymMatrix& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw CeoError(ErrorCode::kDimensionMismatch,
                   std::string(what) + ": " + std::to_string(a.dim()) + " vs " +
                       std::to_string(b.dim()));
  }
}

namespace {

SymMatrix::Spectrum RequirePd(const SymMatrix& a, const char* what) {
  auto s = a.Decompose();
  if (!(s.values(0) > kPdRelTol * Scale(s.values))) {
    throw CeoError(ErrorCode::kNotPositiveDefinite,
                   std::string(what) + ": min eigenvalue " +
                       std::to_string(s.values(0)));
  }
  return s;
}

}  // namespace

double logdet(const SymMatrix& a) {
  auto s = RequirePd(a, "logdet");
  return s.values.array().log().sum();
}

double logdet_or_neg_inf(const SymMatrix& a) {
  auto s = a.Decompose();
  if (!(s.values(0) > kPdRelTol * Scale(s.values))) {
    return -std::numeric_limits<double>::infinity();
  }
  return s.values.array().log().sum();
}

SymMatrix inverse(const SymMatrix& a) {
  auto s = RequirePd(a, "inverse");
  Eigen::VectorXd inv = s.values.cwiseInverse();
  return SymMatrix::SymmetricPart(s.vectors * inv.asDiagonal() * s.vectors.transpose());
}

bool psd_leq(const SymMatrix& a, const SymMatrix& b, double tol) {
  require_same_dim(a, b, "psd_leq");
  auto diff = (b - a).Decompose();
  double scale = std::max(kAbsTolFloor, tol) * Scale(diff.values);
  return diff.values(0) >= -scale;
}

bool psd_less(const SymMatrix& a, const SymMatrix& b, double margin) {
  require_same_dim(a, b, "psd_less");
  return (b - a).MinEigenvalue() > margin;
}

SymMatrix project_box(const SymMatrix& x, const SymMatrix& upper) {
  require_same_dim(x, upper, "project_box");
  auto u = RequirePd(upper, "project_box upper");
  Eigen::VectorXd root = u.values.cwiseSqrt();
  Eigen::MatrixXd half = u.vectors * root.asDiagonal() * u.vectors.transpose();
  Eigen::MatrixXd inv_half =
      u.vectors * root.cwiseInverse().asDiagonal() * u.vectors.transpose();
  SymMatrix white = SymMatrix::SymmetricPart(inv_half * x.matrix() * inv_half);
  SymMatrix clipped =
      spectral_apply(white, [](double v) { return std::clamp(v, 0.0, 1.0); });
  return SymMatrix::SymmetricPart(half * clipped.matrix() * half);
}

SymMatrix sym_sqrt(const SymMatrix& a) {
  auto s = a.Decompose();
  double tol = kPdRelTol * Scale(s.values);
  if (s.values(0) < -tol) {
    throw CeoError(ErrorCode::kNotPositiveSemiDefinite,
                   "sym_sqrt: min eigenvalue " + std::to_string(s.values(0)));
  }
  Eigen::VectorXd root = s.values.cwiseMax(0.0).cwiseSqrt();
  return SymMatrix::SymmetricPart(s.vectors * root.asDiagonal() * s.vectors.transpose());
}

SymMatrix inv_sqrt(const SymMatrix& a) {
  auto s = RequirePd(a, "inv_sqrt");
  Eigen::VectorXd r = s.values.cwiseSqrt().cwiseInverse();
  return SymMatrix::SymmetricPart(s.vectors * r.asDiagonal() * s.vectors.transpose());
}

}  // namespace ceo
