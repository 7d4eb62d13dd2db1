// Copyright 2026 The hcx Authors. All Rights Reserved.
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


#include "hcx/joint_range.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace hcx {
namespace {

QuadraticPair<double> homogeneous(const Matrix<double>& A, const Matrix<double>& B) {
  const Eigen::Index n = A.rows();
  return QuadraticPair<double>{SymMatrix<double>(A), SymMatrix<double>(B), Vector<double>::Zero(n),
                               Vector<double>::Zero(n)};
}

TEST(JointRangeTest, DinesExample) {
  Matrix<double> A = Matrix<double>::Zero(2, 2), B = Matrix<double>::Zero(2, 2);
  A.diagonal() << 1, -1;
  B(0, 1) = B(1, 0) = 0.5;
  const ProbeReport<double> rep = joint_range_probe(homogeneous(A, B), 1000, 20, 1);
  EXPECT_EQ(rep.fraction, 1.0);
  EXPECT_EQ(rep.realized, 20);
}

TEST(JointRangeTest, ParabolaIsNotConvex) {
  const QuadraticPair<double> pair{SymMatrix<double>(Matrix<double>::Ones(1, 1)),
                                   SymMatrix<double>(Matrix<double>::Zero(1, 1)),
                                   Vector<double>::Zero(1), Vector<double>::Ones(1)};
  const ProbeReport<double> rep = joint_range_probe(pair, 1000, 20, 1);
  EXPECT_LT(rep.fraction, 1.0);
}

TEST(JointRangeTest, RandomHomogeneousPairs) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = testing::uniform_int(rng, 2, 4);
    const ProbeReport<double> rep =
        joint_range_probe(homogeneous(testing::random_symmetric(rng, n),
                                      testing::random_symmetric(rng, n)),
                          1000, 10, trial);
    EXPECT_GE(rep.fraction, 0.99);
  }
}

TEST(JointRangeTest, PreconditionsAndDeterminism) {
  const QuadraticPair<double> pair = homogeneous(Matrix<double>::Identity(2, 2),
                                                 -Matrix<double>::Identity(2, 2));
  EXPECT_THROW(joint_range_probe(pair, 999, 10, 0), InvalidInput);
  EXPECT_THROW(joint_range_probe(pair, 1000, 9, 0), InvalidInput);
  const auto a = joint_range_probe(pair, 1000, 10, 4), b = joint_range_probe(pair, 1000, 10, 4);
  EXPECT_EQ(a.worst_residual, b.worst_residual);
}

TEST(QuadraticPairTest, RejectsMismatchedDimensions) {
  QuadraticPair<double> pair = homogeneous(Matrix<double>::Identity(2, 2),
                                           Matrix<double>::Identity(2, 2));
  pair.a = Vector<double>::Zero(3);
  EXPECT_THROW(pair.validate(), InvalidInput);
}

}  // namespace
}  // namespace hcx
