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

#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "hcx/be_problem.hpp"
#include "hcx/certificates.hpp"
#include "hcx/options.hpp"
#include "hcx/trs.hpp"

namespace hcx {

enum class BePath { LinearSystem, ZeroB, Interpolated, EndpointMin, EndpointMax };

inline const char* to_string(BePath p) {
  switch (p) {
    case BePath::LinearSystem: return "linear_system";
    case BePath::ZeroB: return "zero_b";
    case BePath::Interpolated: return "interpolated";
    case BePath::EndpointMin: return "endpoint_min";
    case BePath::EndpointMax: return "endpoint_max";
  }
  return "unknown";
}

template <typename Scalar>
struct BeSolution {
  Scalar ratio = 0;   // optimal |Ax - b| / (|A||x| + |b|)
  Scalar t_star = 0;  // ratio^2
  Scalar lambda_star = 0;
  Scalar z_star = 0;
  Scalar w_star = 0;
  Vector<Scalar> x;
  std::optional<Scalar> alpha;
  BePath path = BePath::EndpointMin;
  int iterations = 0;
  CertificateReport<Scalar> certificate;
};

template <typename Scalar>
struct BeRecovery {
  Vector<Scalar> x;
  std::optional<Scalar> alpha;
  BePath path = BePath::EndpointMin;
};

/// Finds x with |x|^2 = z and |Ax - b|^2 = t (|A| sqrt(z) + |b|)^2 from the
/// minimizer x_m and maximizer x_M of |Ax - b|^2 on that sphere, bisecting
/// along the normalized chord x(alpha) between them when neither endpoint
/// already hits the target.
template <typename Scalar>
BeRecovery<Scalar> recover_x_be(const BeProblem<Scalar>& prob, Scalar t, Scalar z) {
  using std::abs;
  using std::sqrt;
  prob.validate();
  if (!(t > Scalar(0) && t < Scalar(1))) throw InvalidInput("recover_x_be: t must lie in (0, 1)");
  if (!(z > Scalar(0))) throw InvalidInput("recover_x_be: z must be positive");

  const Matrix<Scalar>& A = prob.A;
  const SymMatrix<Scalar> Q(A.transpose() * A);
  const Vector<Scalar> c = Scalar(-2) * (A.transpose() * prob.b);
  const SymEig<Scalar> eig = eigh(Q);
  const auto x_m = solve_trs(TrsRequest<Scalar>{Q, c, z, TrsConstraint::Sphere, TrsSense::Min}, eig).x;
  const auto x_M = solve_trs(TrsRequest<Scalar>{Q, c, z, TrsConstraint::Sphere, TrsSense::Max}, eig).x;

  const auto residual_sq = [&](const Vector<Scalar>& x) { return (A * x - prob.b).squaredNorm(); };
  const Scalar target = t * std::pow(spectral_norm(A) * sqrt(z) + prob.b.norm(), 2);
  const Scalar endpoint_tol = Scalar(1e-8) * (Scalar(1) + target);
  const Scalar g0 = residual_sq(x_m) - target;
  const Scalar g1 = residual_sq(x_M) - target;
  if (abs(g0) <= endpoint_tol) return {x_m, std::nullopt, BePath::EndpointMin};
  if (abs(g1) <= endpoint_tol) return {x_M, std::nullopt, BePath::EndpointMax};
  if (!(g0 < Scalar(0) && g1 > Scalar(0)))
    throw InternalInconsistency("recover_x_be: target residual " + std::to_string(double(target)) +
                                " is not bracketed by the sphere extremes [" +
                                std::to_string(double(g0 + target)) + ", " +
                                std::to_string(double(g1 + target)) + "]");

  const Scalar radius = sqrt(z);
  const Scalar tiny = Scalar(64) * std::numeric_limits<Scalar>::epsilon() * radius;
  const auto chord = [&](Scalar& alpha) {
    Vector<Scalar> v = x_m + alpha * (x_M - x_m);
    if (v.norm() <= tiny) {  // x_m = -x_M passes through the origin
      alpha += Scalar(1e-12);
      v = x_m + alpha * (x_M - x_m);
    }
    return Vector<Scalar>(radius * v / v.norm());
  };

  const Scalar tol = Scalar(1e-9) * (Scalar(1) + target);
  Scalar lo = 0, hi = 1;
  for (int i = 0; i < 200; ++i) {
    Scalar alpha = lo + (hi - lo) / Scalar(2);
    Vector<Scalar> x = chord(alpha);
    const Scalar g = residual_sq(x) - target;
    if (abs(g) <= tol) return {std::move(x), alpha, BePath::Interpolated};
    if (g < Scalar(0)) lo = alpha; else hi = alpha;
  }
  throw InternalInconsistency("recover_x_be: interpolation bisection did not reach tolerance");
}

namespace detail {

// Minimizes the convex F on its admissible interval by safeguarded Newton on
// F' with a bisection fallback. Returns lambda*.
template <typename Scalar>
Scalar minimize_be_dual(const BeDual<Scalar>& dual, const SolverOptions& opts, int* iterations) {
  using std::abs;
  const Scalar lam_min = dual.eig().lambda_min();
  Scalar lo = Scalar(1e-12) * lam_min;
  Scalar hi = dual.right_end_closed() ? dual.right_end() : dual.last_positive();
  *iterations = 0;
  if (dual.right_end_closed() && dual(hi).derivative <= Scalar(0)) return hi;
  if (!(dual(hi).derivative > Scalar(0)))
    throw NoConvergence("be: dual derivative has no sign change on the admissible interval",
                        double(hi), 0);
  if (!(dual(lo).derivative < Scalar(0)))
    throw NoConvergence("be: dual derivative is not negative near zero", double(lo), 0);

  const Scalar tol = Scalar(opts.stationarity_tol);
  Scalar lambda = lo + (hi - lo) / Scalar(2);
  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    const BeDualPoint<Scalar> dp = dual(lambda);
    if (abs(dp.derivative) * lambda <= tol * dp.value) break;
    if (dp.derivative < Scalar(0)) lo = lambda; else hi = lambda;
    if (hi - lo <= Scalar(4) * std::numeric_limits<Scalar>::epsilon() * hi) break;
    Scalar next = lambda - dp.derivative / dp.curvature;
    if (!(next > lo && next < hi)) next = lo + (hi - lo) / Scalar(2);
    lambda = next;
  }
  if (iter >= opts.max_iter) throw NoConvergence("be: iteration limit reached", double(lambda), iter);
  *iterations = iter;
  return lambda;
}

}  // namespace detail

/// Global minimizer of the normwise backward error. Consistent systems and
/// b = 0 are answered in closed form; otherwise the convex dual F is
/// minimized, t* = 1 / F(lambda*), and x is recovered on the sphere
/// |x|^2 = z* = (t* |A| |b| / (lambda* - t* |A|^2))^2.
template <typename Scalar>
BeSolution<Scalar> solve_be(const BeProblem<Scalar>& prob, const SolverOptions& opts = {}) {
  using std::sqrt;
  prob.validate();
  const Matrix<Scalar>& A = prob.A;
  const Scalar norm_a = spectral_norm(A);
  const Scalar norm_b = prob.b.norm();
  const Scalar cert_tol = Scalar(opts.certificate_tol);
  BeSolution<Scalar> sol;

  if (norm_b == Scalar(0)) {
    const SymEig<Scalar> eig = eigh(SymMatrix<Scalar>(A.transpose() * A));
    Eigen::JacobiSVD<Matrix<Scalar>> svd(A);
    const auto& sv = svd.singularValues();
    const Scalar sigma_min = A.rows() < A.cols() ? Scalar(0) : sv(sv.size() - 1);
    sol.ratio = sigma_min / norm_a;
    sol.t_star = sol.ratio * sol.ratio;
    sol.lambda_star = eig.lambda_min();
    sol.z_star = 1;
    sol.x = eig.eigenvectors.col(0);
    sol.path = BePath::ZeroB;
    sol.w_star = 0;
    sol.certificate = be_certificate(prob, sol.lambda_star, sol.w_star, cert_tol);
    return sol;
  }

  const Vector<Scalar> x_ls = A.completeOrthogonalDecomposition().solve(prob.b);
  if ((A * x_ls - prob.b).norm() <= Scalar(1e-10) * (Scalar(1) + norm_b)) {
    sol.ratio = 0;
    sol.t_star = 0;
    sol.lambda_star = 0;
    sol.x = x_ls;
    sol.z_star = x_ls.squaredNorm();
    sol.path = BePath::LinearSystem;
    // [[A^T A, -A^T b], [-b^T A, |b|^2]] = [A, -b]^T [A, -b] certifies ratio >= 0.
    sol.w_star = norm_b * norm_b;
    sol.certificate = be_certificate(prob, sol.lambda_star, sol.w_star, cert_tol);
    return sol;
  }

  const BeDual<Scalar> dual(prob);
  if (dual.empty())
    throw DegenerateInstance(
        "be: admissible multiplier interval is empty (A^T A is singular, so the infimum 0 is "
        "approached as |x| grows along null(A) and is not attained)");
  sol.lambda_star = detail::minimize_be_dual(dual, opts, &sol.iterations);
  const Scalar f_star = dual(sol.lambda_star).value;
  sol.t_star = Scalar(1) / f_star;
  sol.ratio = sqrt(sol.t_star);
  const Scalar a2 = norm_a * norm_a;
  const Scalar gap = sol.lambda_star - sol.t_star * a2;
  if (!(gap > Scalar(0)))
    throw InternalInconsistency("be: lambda* <= t* |A|^2 violates the dual substitution");
  sol.z_star = std::pow(sol.t_star * norm_a * norm_b / gap, 2);

  BeRecovery<Scalar> rec = recover_x_be(prob, sol.t_star, sol.z_star);
  sol.x = std::move(rec.x);
  sol.alpha = rec.alpha;
  sol.path = rec.path;
  sol.w_star = be_w_from_t(norm_a, norm_b * norm_b, sol.lambda_star, sol.t_star);
  sol.certificate = be_certificate(prob, sol.lambda_star, sol.w_star, cert_tol);
  return sol;
}

}  // namespace hcx
