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

#include <cmath>
#include <random>

#include <Eigen/Cholesky>
#include <gtest/gtest.h>

#include "ceo/errors.h"
#include "ceo/verify.h"

namespace ceo {
namespace {

double MaxAbs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

SymMatrix RandomSymmetric(int n, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
  return SymMatrix::SymmetricPart(a);
}

TEST(SymMatrixTest, SymmetrizesOnIngest) {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 2.0, 2.0 + 1e-15, 3.0;
  const SymMatrix s(m);
  EXPECT_EQ(s(0, 1), s(1, 0));
}

TEST(SymMatrixTest, RejectsAsymmetric) {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 2.0, 2.5, 3.0;
  try {
    SymMatrix s(m);
    FAIL() << "expected kNotSymmetric";
  } catch (const CeoError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotSymmetric);
  }
}

TEST(SymMatrixTest, RejectsNonSquareAndEmpty) {
  EXPECT_THROW(SymMatrix(Eigen::MatrixXd::Zero(2, 3)), CeoError);
  EXPECT_THROW(SymMatrix(Eigen::MatrixXd(0, 0)), CeoError);
}

TEST(LogdetTest, Identity) { EXPECT_DOUBLE_EQ(logdet(SymMatrix::Identity(3)), 0.0); }

TEST(LogdetTest, Diagonal) {
  EXPECT_NEAR(logdet(SymMatrix::Diagonal({2.0, 2.0})), 2.0 * std::log(2.0), 1e-15);
  EXPECT_NEAR(logdet(SymMatrix::Diagonal({2.0, 2.0})), 1.3862943611, 1e-10);
}

TEST(LogdetTest, MatchesCholeskyOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const SymMatrix a = random_pd(3, rng);
    const Eigen::LLT<Eigen::MatrixXd> llt(a.matrix());
    const Eigen::MatrixXd l = llt.matrixL();
    double oracle = 0.0;
    for (int i = 0; i < 3; ++i) oracle += 2.0 * std::log(l(i, i));
    EXPECT_NEAR(logdet(a), oracle, 1e-12);
  }
}

TEST(LogdetTest, RejectsSingularAndIndefinite) {
  EXPECT_THROW(logdet(SymMatrix::Diagonal({1.0, 0.0})), CeoError);
  EXPECT_THROW(logdet(SymMatrix::Diagonal({1.0, -1.0})), CeoError);
  try {
    logdet(SymMatrix::Diagonal({1.0, 1e-12}));
    FAIL();
  } catch (const CeoError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotPositiveDefinite);
  }
}

TEST(LogdetTest, Deterministic) {
  Rng rng(3);
  const SymMatrix a = random_pd(4, rng);
  EXPECT_EQ(logdet(a), logdet(a));
}

TEST(LogdetTest, MonotoneUnderPsdOrder) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const SymMatrix a = random_pd(3, rng);
    const SymMatrix b = a + random_pd(3, rng, 0.0, 1.0);
    ASSERT_TRUE(psd_leq(a, b, 0.0));
    EXPECT_LE(logdet(a), logdet(b));
  }
}

TEST(InverseTest, Examples) {
  EXPECT_EQ(inverse(SymMatrix::Identity(2)).matrix(), Eigen::MatrixXd::Identity(2, 2));
  const SymMatrix inv = inverse(SymMatrix::Diagonal({2.0, 4.0}));
  EXPECT_DOUBLE_EQ(inv(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(inv(1, 1), 0.25);
  EXPECT_DOUBLE_EQ(inv(0, 1), 0.0);
}

TEST(InverseTest, ResidualAndInvolution) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const SymMatrix a = random_pd(4, rng);
    const Eigen::MatrixXd r = a.matrix() * inverse(a).matrix() - Eigen::MatrixXd::Identity(4, 4);
    EXPECT_LT(MaxAbs(r), 1e-10);
    const SymMatrix back = inverse(inverse(a));
    EXPECT_LT(MaxAbs(back.matrix() - a.matrix()), 1e-9 * MaxAbs(a.matrix()));
  }
}

TEST(InverseTest, RejectsSingular) {
  EXPECT_THROW(inverse(SymMatrix::Zero(2)), CeoError);
}

TEST(PsdLeqTest, Examples) {
  EXPECT_TRUE(psd_leq(SymMatrix::Zero(2), SymMatrix::Identity(2), 1e-9));
  EXPECT_FALSE(psd_leq(SymMatrix::Diagonal({1.0, 3.0}), SymMatrix::Diagonal({2.0, 2.0}), 1e-9));
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const SymMatrix a = RandomSymmetric(3, rng);
    EXPECT_TRUE(psd_leq(a, a, 1e-9));
  }
}

TEST(PsdLeqTest, ToleranceIsRelative) {
  const SymMatrix b = SymMatrix::Diagonal({1e6, 1e6});
  const SymMatrix a = SymMatrix::Diagonal({1e6 + 1e-4, 0.0});
  EXPECT_TRUE(psd_leq(a, b, 1e-9));
  EXPECT_FALSE(psd_leq(a, b, 1e-12));
}

TEST(PsdLeqTest, DimensionMismatch) {
  try {
    psd_leq(SymMatrix::Identity(2), SymMatrix::Identity(3), 1e-9);
    FAIL();
  } catch (const CeoError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(PsdLessTest, StrictMargin) {
  EXPECT_TRUE(psd_less(SymMatrix::Scalar(1.0), SymMatrix::Scalar(1.1), 1e-9));
  EXPECT_FALSE(psd_less(SymMatrix::Scalar(1.0), SymMatrix::Scalar(1.0), 1e-9));
}

TEST(ProjectBoxTest, Examples) {
  const SymMatrix u = SymMatrix::FromRows({{2.0, 0.5}, {0.5, 1.0}});
  EXPECT_LT(MaxAbs(project_box(u, u).matrix() - u.matrix()), 1e-12);
  EXPECT_LT(MaxAbs(project_box(-SymMatrix::Identity(2), SymMatrix::Identity(2)).matrix()),
            1e-15);
  EXPECT_LT(MaxAbs(project_box(2.0 * SymMatrix::Identity(2), SymMatrix::Identity(2)).matrix() -
                   Eigen::MatrixXd::Identity(2, 2)),
            1e-15);
}

TEST(ProjectBoxTest, OutputInIntervalAndIdempotent) {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const SymMatrix u = random_pd(3, rng);
    const SymMatrix x = 3.0 * RandomSymmetric(3, rng);
    const SymMatrix p = project_box(x, u);
    EXPECT_TRUE(psd_leq(SymMatrix::Zero(3), p, 1e-9));
    EXPECT_TRUE(psd_leq(p, u, 1e-9));
    EXPECT_LT(MaxAbs(project_box(p, u).matrix() - p.matrix()), 1e-12);
  }
}

TEST(ProjectBoxTest, FixedPointInside) {
  Rng rng(17);
  const SymMatrix u = random_pd(3, rng);
  const SymMatrix inside = 0.5 * u;
  EXPECT_LT(MaxAbs(project_box(inside, u).matrix() - inside.matrix()), 1e-12);
}

TEST(SymSqrtTest, Examples) {
  EXPECT_LT(MaxAbs(sym_sqrt(SymMatrix::Identity(2)).matrix() - Eigen::MatrixXd::Identity(2, 2)),
            1e-15);
  const SymMatrix r = sym_sqrt(SymMatrix::Diagonal({4.0, 9.0}));
  EXPECT_NEAR(r(0, 0), 2.0, 1e-15);
  EXPECT_NEAR(r(1, 1), 3.0, 1e-15);
}

TEST(SymSqrtTest, Residual) {
  Rng rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    const SymMatrix a = random_pd(3, rng, 0.0, 3.0);
    const SymMatrix r = sym_sqrt(a);
    EXPECT_LT((r.matrix() * r.matrix() - a.matrix()).norm(), 1e-10);
    EXPECT_GE(r.MinEigenvalue(), -1e-12);
  }
}

TEST(SymSqrtTest, RejectsIndefinite) {
  try {
    sym_sqrt(SymMatrix::Diagonal({1.0, -0.5}));
    FAIL();
  } catch (const CeoError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotPositiveSemiDefinite);
  }
}

TEST(SymSqrtTest, InvSqrtWhitens) {
  Rng rng(23);
  const SymMatrix a = random_pd(3, rng);
  const SymMatrix w = inv_sqrt(a);
  EXPECT_LT(MaxAbs(a.Congruence(w.matrix()).matrix() - Eigen::MatrixXd::Identity(3, 3)), 1e-12);
}

}  // namespace
}  // namespace ceo
