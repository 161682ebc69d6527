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

#include "ceo/closed_forms.h"

#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "ceo/bounds.h"
#include "ceo/errors.h"
#include "frozen_values.h"

namespace ceo {
namespace {

CeoInstance UnitPair(int dim) {
  return CeoInstance(SymMatrix::Identity(dim), {SymMatrix::Identity(dim), SymMatrix::Identity(dim)});
}

ParallelCeoInstance UnitParallel(double d1, double d2) {
  return ParallelCeoInstance{{1.0, 1.0}, {{1.0, 1.0}, {1.0, 1.0}}, {d1, d2}};
}

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const CeoError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no CeoError thrown";
  return ErrorCode::kInvalidArgument;
}

TEST(GapAssumptionsTest, HoldOnDemoInstance) {
  const auto r = check_gap_assumptions(UnitPair(1), DistortionTarget(SymMatrix::Scalar(0.75)),
                                       WeightVector({4, 1}));
  ASSERT_EQ(r.checks.size(), 3u);
  EXPECT_TRUE(r.all_hold());
  EXPECT_FALSE(r.swapped);
  EXPECT_NEAR(r.checks[0].margin, 2.0 / 3.0 - 0.25, 1e-15);
  EXPECT_NEAR(r.checks[1].margin, 1.0 - 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.checks[2].margin, 2.0 - 16.0 / 9.0, 1e-15);
}

TEST(GapAssumptionsTest, FailsAtHalfDistortion) {
  const auto r = check_gap_assumptions(UnitPair(1), DistortionTarget(SymMatrix::Scalar(0.5)),
                                       WeightVector({4, 1}));
  EXPECT_FALSE(r.all_hold());
  EXPECT_NE(r.Describe().find("assumption fails"), std::string::npos);
}

TEST(GapAssumptionsTest, EqualWeightsFail) {
  const auto r = check_gap_assumptions(UnitPair(1), DistortionTarget(SymMatrix::Scalar(0.75)),
                                       WeightVector({1, 1}));
  EXPECT_FALSE(r.all_hold());
  EXPECT_EQ(r.checks[1].margin, -INFINITY);
  EXPECT_EQ(r.checks[2].margin, -INFINITY);
  EXPECT_EQ(CodeOf([] {
              corollary3_tplus(UnitPair(1), DistortionTarget(SymMatrix::Scalar(0.75)),
                               WeightVector({1, 1}));
            }),
            ErrorCode::kAssumptionsViolated);
}

TEST(GapAssumptionsTest, WrongSensorCount) {
  const CeoInstance three(SymMatrix::Scalar(1.0),
                          {SymMatrix::Scalar(1.0), SymMatrix::Scalar(1.0), SymMatrix::Scalar(1.0)});
  EXPECT_EQ(CodeOf([&] {
              check_gap_assumptions(three, DistortionTarget(SymMatrix::Scalar(0.75)),
                                    WeightVector({3, 2, 1}));
            }),
            ErrorCode::kWrongSensorCount);
}

TEST(GapClosedFormTest, MatchesOracle) {
  const CeoInstance inst = UnitPair(1);
  const DistortionTarget t(SymMatrix::Scalar(0.75));
  const WeightVector mu({4, 1});
  const double tplus = corollary3_tplus(inst, t, mu);
  const double tminus = corollary4_tminus_upper(inst, t, mu);
  EXPECT_NEAR(tplus, frozen::kGapTplus, 1e-12);
  EXPECT_NEAR(tplus, 0.5 * std::log(2.0), 1e-15);
  EXPECT_NEAR(tminus, frozen::kGapTminusUpper, 1e-12);
  EXPECT_NEAR(tplus - tminus, frozen::kGapGap, 1e-12);
  EXPECT_GT(tplus - tminus, 0.0);
}

TEST(GapClosedFormTest, WitnessesAttainTheValues) {
  const CeoInstance inst = UnitPair(1);
  const DistortionTarget t(SymMatrix::Scalar(0.75));
  const WeightVector mu({4, 1});
  const Allocation w3 = corollary3_witness(inst, t, mu);
  EXPECT_NEAR(w3[0](0, 0), 1.0, 0.0);
  EXPECT_NEAR(w3[1](0, 0), 2.0 - 4.0 / 3.0, 1e-15);
  EXPECT_TRUE(alloc_feasible(inst, w3, t).ok);
  EXPECT_NEAR(outer_tangent_value(inst, w3, t, mu), corollary3_tplus(inst, t, mu), 1e-12);
  const Allocation w4 = corollary4_witness(inst, t, mu);
  EXPECT_TRUE(alloc_feasible(inst, w4, t).ok);
  EXPECT_NEAR(chen_wang_tangent_value(inst, w4, t, mu), corollary4_tminus_upper(inst, t, mu),
              1e-12);
}

TEST(GapClosedFormTest, SwapRule) {
  const CeoInstance inst(SymMatrix::Scalar(1.0), {SymMatrix::Scalar(1.0), SymMatrix::Scalar(0.9)});
  const CeoInstance swapped(SymMatrix::Scalar(1.0),
                            {SymMatrix::Scalar(0.9), SymMatrix::Scalar(1.0)});
  const DistortionTarget t(SymMatrix::Scalar(0.7));
  const WeightVector mu({4, 1}), mu_swapped({1, 4});
  ASSERT_TRUE(check_gap_assumptions(inst, t, mu).all_hold());
  EXPECT_TRUE(check_gap_assumptions(swapped, t, mu_swapped).swapped);
  EXPECT_NEAR(corollary3_tplus(inst, t, mu), corollary3_tplus(swapped, t, mu_swapped), 1e-15);
  EXPECT_NEAR(corollary4_tminus_upper(inst, t, mu),
              corollary4_tminus_upper(swapped, t, mu_swapped), 1e-15);
  const Allocation w = corollary3_witness(inst, t, mu);
  const Allocation ws = corollary3_witness(swapped, t, mu_swapped);
  EXPECT_NEAR(w[0](0, 0), ws[1](0, 0), 1e-15);
  EXPECT_NEAR(w[1](0, 0), ws[0](0, 0), 1e-15);
}

// Block-diagonal copies add up: M identical scalar problems.
TEST(GapClosedFormTest, VectorCaseScalesWithDimension) {
  const DistortionTarget t(0.75 * SymMatrix::Identity(3));
  const WeightVector mu({4, 1});
  EXPECT_NEAR(corollary3_tplus(UnitPair(3), t, mu), 3.0 * frozen::kGapTplus, 1e-12);
  EXPECT_NEAR(corollary4_tminus_upper(UnitPair(3), t, mu), 3.0 * frozen::kGapTminusUpper,
              1e-12);
  const auto r = check_gap_assumptions(UnitPair(3), t, mu);
  EXPECT_TRUE(std::isnan(r.checks[0].lhs));
}

TEST(ParallelAssumptionsTest, MarginsOnDemoInstance) {
  const auto r = check_parallel_assumptions(UnitParallel(0.4, 0.8), WeightVector({4, 1}));
  ASSERT_EQ(r.checks.size(), 4u);
  EXPECT_TRUE(r.all_hold());
  EXPECT_NEAR(r.checks[0].margin, 0.75 - 0.25, 1e-15);
  EXPECT_NEAR(r.checks[1].margin, 1.0 - 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.checks[2].margin, 2.0 - 5.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.checks[3].margin, 1.25 - 1.2, 1e-15);
}

TEST(ParallelAssumptionsTest, FailuresAreReported) {
  EXPECT_FALSE(check_parallel_assumptions(UnitParallel(0.4, 0.5), WeightVector({4, 1})).all_hold());
  EXPECT_FALSE(check_parallel_assumptions(UnitParallel(0.4, 0.8), WeightVector({2, 2})).all_hold());
  EXPECT_EQ(CodeOf([] { corollary5_parallel_tp(UnitParallel(0.4, 0.5), WeightVector({4, 1})); }),
            ErrorCode::kAssumptionsViolated);
  const ParallelCeoInstance three{{1.0, 1.0, 1.0}, {{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}},
                                  {0.4, 0.8, 0.8}};
  EXPECT_EQ(CodeOf([&] { check_parallel_assumptions(three, WeightVector({4, 1})); }),
            ErrorCode::kWrongSensorCount);
}

TEST(ParallelClosedFormTest, MatchesOracle) {
  const ParallelCeoInstance p = UnitParallel(0.4, 0.8);
  const WeightVector mu({4, 1});
  const ParallelClosedForm tp = corollary5_parallel_tp(p, mu);
  const ParallelClosedForm up = corollary6_tplus_upper(p, mu);
  EXPECT_NEAR(tp.f1_min, frozen::kParF1Min, 1e-10);
  EXPECT_NEAR(tp.d11, frozen::kParD11, 1e-7);
  EXPECT_NEAR(tp.d21, frozen::kParD21, 1e-7);
  EXPECT_NEAR(tp.value, frozen::kParTp, 1e-10);
  EXPECT_NEAR(up.value, frozen::kParTplusUpper, 1e-10);
  EXPECT_NEAR(tp.value - up.value, frozen::kParGap, 1e-10);
  EXPECT_EQ(tp.f1_min, up.f1_min);
}

TEST(ParallelClosedFormTest, F1MinimumIsInteriorAndLocal) {
  const ParallelCeoInstance p = UnitParallel(0.4, 0.8);
  const WeightVector mu({4, 1});
  const ParallelClosedForm tp = corollary5_parallel_tp(p, mu);
  EXPECT_NEAR(parallel_f1(p, mu, tp.d11, tp.d21), tp.f1_min, 1e-14);
  EXPECT_EQ(parallel_f1(p, mu, 0.0, 0.5), INFINITY);
  EXPECT_EQ(parallel_f1(p, mu, 1.5, 0.5), INFINITY);
  // Moving along the component-1 equality segment never goes lower.
  for (double h : {-1e-3, -1e-5, 1e-5, 1e-3}) {
    const double d21 = tp.d21 + h;
    const double d11 = 0.5 - d21;
    EXPECT_GE(parallel_f1(p, mu, d11, d21), tp.f1_min);
  }
}

TEST(ParallelClosedFormTest, WitnessesSaturateAndAttain) {
  const ParallelCeoInstance p = UnitParallel(0.4, 0.8);
  const WeightVector mu({4, 1});
  const ParallelClosedForm tp = corollary5_parallel_tp(p, mu);
  Allocation diag;
  for (int l = 0; l < 2; ++l) diag.mats.push_back(SymMatrix::Diagonal(tp.witness[l]));
  EXPECT_TRUE(alloc_feasible(p.ToMatrix(), diag, p.TargetMatrix()).ok);
  const ParallelClosedForm up = corollary6_tplus_upper(p, mu);
  Allocation diag_up;
  for (int l = 0; l < 2; ++l) diag_up.mats.push_back(SymMatrix::Diagonal(up.witness[l]));
  EXPECT_TRUE(alloc_feasible(p.ToMatrix(), diag_up, p.TargetMatrix()).ok);
  EXPECT_NEAR(outer_tangent_value(p.ToMatrix(), diag_up, p.TargetMatrix(), mu), up.value, 1e-9);
}

TEST(ParallelClosedFormTest, SwapRule) {
  const ParallelCeoInstance p = UnitParallel(0.4, 0.8);
  const ParallelClosedForm a = corollary5_parallel_tp(p, WeightVector({4, 1}));
  const ParallelClosedForm b = corollary5_parallel_tp(p, WeightVector({1, 4}));
  EXPECT_NEAR(a.value, b.value, 1e-12);
  EXPECT_NEAR(a.d11, b.d21, 1e-7);
  EXPECT_NEAR(a.witness[0][1], b.witness[1][1], 1e-12);
}

}  // namespace
}  // namespace ceo
