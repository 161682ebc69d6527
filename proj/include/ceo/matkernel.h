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

// Small dense matrix kernel. Everything here is built on a single primitive,
// the symmetric eigendecomposition; matrices are tiny (M <= 8) so no attempt
// is made to exploit structure.

#ifndef CEO_MATKERNEL_H_
#define CEO_MATKERNEL_H_

#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

#include "ceo/errors.h"

namespace ceo {

using GenMatrix = Eigen::MatrixXd;

// Absolute floor applied to every relative PSD tolerance.
inline constexpr double kAbsTolFloor = 1e-12;
// Relative threshold below which an eigenvalue counts as non-positive.
inline constexpr double kPdRelTol = 1e-10;
// Relative asymmetry accepted on ingest before symmetrizing.
inline constexpr double kSymmetryRelTol = 1e-12;

// A real symmetric matrix. Entries are exactly symmetric after construction.
class SymMatrix {
 public:
  struct Spectrum {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns are orthonormal eigenvectors
  };

  SymMatrix() = default;

  // Validates symmetry to kSymmetryRelTol and then averages with the
  // transpose. Throws kNotSymmetric or kDimensionMismatch.
  explicit SymMatrix(const Eigen::MatrixXd& m);

  // Symmetric part (m + m^T) / 2 without validation; for internal products
  // that are symmetric in exact arithmetic.
  static SymMatrix SymmetricPart(const Eigen::MatrixXd& m);

  static SymMatrix Identity(int n);
  static SymMatrix Zero(int n);
  static SymMatrix Diagonal(const std::vector<double>& diag);
  static SymMatrix Scalar(double value);
  static SymMatrix FromRows(std::initializer_list<std::initializer_list<double>> rows);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }
  bool IsDiagonal() const;

  Spectrum Decompose() const;
  double MinEigenvalue() const;
  double SpectralNorm() const;

  SymMatrix operator+(const SymMatrix& o) const;
  SymMatrix operator-(const SymMatrix& o) const;
  SymMatrix operator-() const;
  SymMatrix operator*(double s) const;
  friend SymMatrix operator*(double s, const SymMatrix& a) { return a * s; }
  bool operator==(const SymMatrix& o) const { return m_ == o.m_; }

  // b^T * this * b, symmetrized. b may be rectangular.
  SymMatrix Congruence(const GenMatrix& b) const;

 private:
  Eigen::MatrixXd m_;
};

// Natural-log determinant. Throws kNotPositiveDefinite.
double logdet(const SymMatrix& a);
SymMatrix inverse(const SymMatrix& a);

// True iff b - a is PSD up to tol * max(1, ||b - a||_2).
bool psd_leq(const SymMatrix& a, const SymMatrix& b, double tol);
// Strict order: lambda_min(b - a) > margin.
bool psd_less(const SymMatrix& a, const SymMatrix& b, double margin);

// Projection onto the matrix interval [0, upper] taken in upper-whitened
// coordinates: the interval becomes [0, I] and eigenvalues are clipped.
SymMatrix project_box(const SymMatrix& x, const SymMatrix& upper);

// PSD square root. Throws kNotPositiveSemiDefinite.
SymMatrix sym_sqrt(const SymMatrix& a);
// Inverse square root of a PD matrix.
SymMatrix inv_sqrt(const SymMatrix& a);

// Applies f to every eigenvalue: V f(L) V^T.
template <typename F>
SymMatrix spectral_apply(const SymMatrix& a, F&& f) {
  auto s = a.Decompose();
  Eigen::VectorXd mapped = s.values.unaryExpr(f);
  return SymMatrix::SymmetricPart(s.vectors * mapped.asDiagonal() *
                                  s.vectors.transpose());
}

// Logdet that tolerates singular PSD input: returns -infinity when the
// smallest eigenvalue is at or below the PD threshold.
double logdet_or_neg_inf(const SymMatrix& a);

void require_same_dim(const SymMatrix& a, const SymMatrix& b, const char* what);

}  // namespace ceo

#endif  // CEO_MATKERNEL_H_
