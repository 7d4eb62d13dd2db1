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


#include "hcx/prs.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "hcx/oracle.hpp"
#include "test_util.hpp"

namespace hcx {
namespace {

PrsProblem<double> make_prs(const Matrix<double>& A, const Vector<double>& b, double p,
                            double rho = 1.0) {
  return PrsProblem<double>{SymMatrix<double>(A), b, p, rho};
}

// Random admissible multiplier: strictly inside the domain, spread over a
// few multiples of the spectral scale.
double random_lambda(std::mt19937_64& rng, const PrsDual<double>& dual) {
  const double width = 3.0 * dual.eig().scale();
  return dual.lower_bound() + width * testing::uniform(rng, 1e-3, 1.0);
}

TEST(PhiTest, MatchesGridMinimum) {
  for (double p : {2.5, 3.0, 4.0, 6.0}) {
    for (double lambda : {0.1, 1.0, 3.7}) {
      const double rho = 0.7;
      const PhiValue<double> ph = phi(lambda, p, rho);
      const double z_opt = phi_argmin(lambda, p, rho);
      double best = 0.0;
      for (int k = 1; k <= 200000; ++k) {
        const double z = 4.0 * z_opt * k / 200000;
        best = std::min(best, rho * std::pow(z, p / 2) - lambda * z);
      }
      EXPECT_NEAR(ph.value, best, 1e-8 * (1 + std::abs(best)));
      EXPECT_DOUBLE_EQ(ph.derivative, -z_opt);
    }
  }
  EXPECT_EQ(phi(0.0, 3.0, 1.0).value, 0.0);
  EXPECT_THROW(phi_argmin(-1.0, 3.0, 1.0), InvalidInput);
}

TEST(SolvePrsTest, NegativeIdentityClosedForm) {
  for (int n = 2; n <= 5; ++n) {
    const PrsSolution<double> sol =
        solve_prs(make_prs(-Matrix<double>::Identity(n, n), Vector<double>::Zero(n), 4.0));
    EXPECT_NEAR(sol.value, -0.25, 1e-12);
    EXPECT_NEAR(sol.lambda_star, 1.0, 1e-12);
    EXPECT_NEAR(sol.z_star, 0.5, 1e-12);
    EXPECT_NEAR(sol.x.squaredNorm(), 0.5, 1e-12);
    EXPECT_EQ(sol.prs_case, PrsCase::Hard);
    EXPECT_TRUE(sol.certificate.verdict);
  }
}

TEST(SolvePrsTest, OneDimensionalDenseGrid) {
  const PrsProblem<double> prob =
      make_prs(Matrix<double>::Constant(1, 1, -1.0), Vector<double>::Constant(1, -2.0), 3.0);
  const auto h = [](double x) { return -x * x - 2 * x + std::pow(std::abs(x), 3); };
  constexpr int kPoints = 10000000;
  double best_x = -10, best = h(best_x);
  for (int k = 1; k < kPoints; ++k) {
    const double x = -10 + 20.0 * k / (kPoints - 1);
    if (h(x) < best) best = h(x), best_x = x;
  }
  // Newton polish on h'(x) = -2x - 2 + 3x|x|.
  for (int it = 0; it < 20; ++it) {
    const double g = -2 * best_x - 2 + 3 * best_x * std::abs(best_x);
    const double H = -2 + 6 * std::abs(best_x);
    best_x -= g / H;
  }
  const PrsSolution<double> sol = solve_prs(prob);
  EXPECT_NEAR(sol.value, h(best_x), 1e-12);
  EXPECT_NEAR(sol.x(0), best_x, 1e-9);
  EXPECT_EQ(sol.prs_case, PrsCase::Easy);
}

TEST(SolvePrsTest, ConvexCase) {
  Matrix<double> A = Matrix<double>::Identity(3, 3);
  A(0, 0) = 2;
  const Vector<double> b = Vector<double>::Ones(3);
  const PrsSolution<double> sol = solve_prs(make_prs(A, b, 3.0));
  EXPECT_EQ(sol.prs_case, PrsCase::Convex);
  const OracleReport<double> ref = oracle_prs(make_prs(A, b, 3.0), 16, 1);
  EXPECT_NEAR(sol.value, ref.value, 1e-9);
}

TEST(SolvePrsTest, ZeroDataGivesOrigin) {
  const PrsSolution<double> sol =
      solve_prs(make_prs(Matrix<double>::Identity(2, 2), Vector<double>::Zero(2), 3.0));
  EXPECT_EQ(sol.value, 0.0);
  EXPECT_EQ(sol.x.norm(), 0.0);
}

TEST(SolvePrsTest, AgreesWithOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const PrsProblem<double> prob = testing::random_prs(rng);
    const PrsSolution<double> sol = solve_prs(prob);
    const OracleReport<double> ref = oracle_prs(prob, 32, trial);
    EXPECT_NEAR(sol.value, ref.value, 1e-5 * (1 + std::abs(ref.value))) << "trial " << trial;
    EXPECT_TRUE(sol.certificate.verdict);
    EXPECT_LE(sol.dual_gap_bound, 1e-8 * (1 + std::abs(sol.value)));
  }
}

TEST(SolvePrsTest, NonUnitRho) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    PrsProblem<double> prob = testing::random_prs(rng);
    const double base = solve_prs(prob).value;
    prob.rho = 2.5;
    const double scaled = solve_prs(prob).value;
    const double oracle = oracle_prs(prob, 32, 3).value;
    EXPECT_NEAR(scaled, oracle, 1e-5 * (1 + std::abs(oracle)));
    EXPECT_GE(scaled, base - 1e-12);  // h grows pointwise with rho
  }
}

TEST(PrsDualTest, WeakDuality) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const PrsProblem<double> prob = testing::random_prs(rng);
    const PrsDual<double> dual(prob);
    for (int k = 0; k < 10; ++k) {
      const double lambda = random_lambda(rng, dual);
      const Vector<double> x =
          testing::uniform(rng, 0.0, 3.0) * testing::gaussian_vector(rng, prob.dim());
      const double d = dual(lambda).value, h = evaluate_objective(prob, x);
      EXPECT_LE(d, h + 1e-9 * (1 + std::abs(d) + std::abs(h)));
    }
  }
}

TEST(PrsDualTest, MidpointConcavity) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    const PrsProblem<double> prob = testing::random_prs(rng);
    const PrsDual<double> dual(prob);
    const double l1 = random_lambda(rng, dual), l2 = random_lambda(rng, dual);
    const double d1 = dual(l1).value, d2 = dual(l2).value, dm = dual((l1 + l2) / 2).value;
    EXPECT_GE(dm, (d1 + d2) / 2 - 1e-9 * (1 + std::abs(d1) + std::abs(d2)));
  }
}

TEST(PrsDualTest, DerivativeMatchesFiniteDifference) {
  std::mt19937_64 rng(41);
  const PrsProblem<double> prob = testing::random_prs(rng);
  const PrsDual<double> dual(prob);
  const double lambda = dual.lower_bound() + 1.3, h = 1e-6;
  const double fd = (dual(lambda + h).value - dual(lambda - h).value) / (2 * h);
  EXPECT_NEAR(dual(lambda).derivative, fd, 1e-5 * (1 + std::abs(fd)));
}

TEST(PrsDualTest, DomainErrors) {
  Matrix<double> A = -Matrix<double>::Identity(2, 2);
  const PrsProblem<double> prob = make_prs(A, Vector<double>::Ones(2), 3.0);
  EXPECT_THROW(dual_value(0.5, prob), DomainError);
  // b has a lambda_min-eigenspace component, so the left end is open.
  EXPECT_THROW(dual_value(1.0, prob), DomainError);
  EXPECT_NO_THROW(dual_value(1.5, prob));
}

TEST(PrsProblemTest, Validation) {
  EXPECT_THROW(solve_prs(make_prs(Matrix<double>::Identity(2, 2), Vector<double>::Ones(2), 2.0)),
               InvalidInput);
  EXPECT_THROW(solve_prs(make_prs(Matrix<double>::Identity(2, 2), Vector<double>::Ones(3), 3.0)),
               InvalidInput);
  EXPECT_THROW(
      solve_prs(make_prs(Matrix<double>::Identity(2, 2), Vector<double>::Ones(2), 3.0, 0.0)),
      InvalidInput);
}

TEST(SolvePrsTest, LongDoubleInstantiation) {
  using LD = long double;
  Matrix<LD> A = -Matrix<LD>::Identity(3, 3);
  const PrsSolution<LD> sol = solve_prs(PrsProblem<LD>{SymMatrix<LD>(A), Vector<LD>::Zero(3), 4, 1});
  EXPECT_NEAR(double(sol.value), -0.25, 1e-15);
  EXPECT_TRUE(sol.certificate.verdict);
}

}  // namespace
}  // namespace hcx
