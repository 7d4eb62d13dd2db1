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
#include <string>

#include "hcx/certificates.hpp"
#include "hcx/options.hpp"
#include "hcx/prs_problem.hpp"
#include "hcx/trs.hpp"

namespace hcx {

enum class PrsCase { Easy, Hard, Convex };

inline const char* to_string(PrsCase c) {
  switch (c) {
    case PrsCase::Easy: return "easy";
    case PrsCase::Hard: return "hard";
    case PrsCase::Convex: return "convex";
  }
  return "unknown";
}

template <typename Scalar>
struct PrsSolution {
  Scalar value = 0;  // h(x)
  Vector<Scalar> x;
  Scalar lambda_star = 0;
  Scalar z_star = 0;
  PrsCase prs_case = PrsCase::Easy;
  Scalar dual_value = 0;  // d(lambda_star)
  Scalar dual_gap_bound = 0;
  int iterations = 0;
  CertificateReport<Scalar> certificate;
};

namespace detail {

// Root of d'(lambda) = |x(lambda)|^2 - z_opt(lambda) on an interval where it
// changes sign from + to -. Newton runs on 1/|x(lambda)| - 1/sqrt(z(lambda)),
// which has the same root, is increasing and concave, and is close to linear
// near the pole of |x(lambda)|.
template <typename Scalar>
Scalar maximize_prs_dual(const PrsDual<Scalar>& dual, const SolverOptions& opts, int* iterations) {
  using std::abs;
  using std::max;
  using std::sqrt;
  const PrsProblem<Scalar>& prob = dual.problem();
  const Scalar lower = dual.lower_bound();
  Scalar lo = dual.lower_bound_admissible()
                  ? lower
                  : lower + Scalar(1e-12) * dual.eig().scale();
  if (!(dual(lo).derivative > Scalar(0)))
    throw NoConvergence("prs: no sign change of the dual derivative near the lower bound",
                        double(lo), 0);

  Scalar step = max(Scalar(1), lo);
  Scalar hi = lo + step;
  for (int grow = 0; dual(hi).derivative >= Scalar(0); ++grow) {
    if (grow > 2000) throw NoConvergence("prs: failed to bracket the dual maximizer", double(hi), 0);
    step *= Scalar(2);
    hi = lo + step;
  }

  const Scalar tol = Scalar(opts.stationarity_tol);
  Scalar lambda = hi;
  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    const DualPoint<Scalar> dp = dual(lambda);
    const Scalar z = phi_argmin(lambda, prob.p, prob.rho);
    if (abs(dp.derivative) <= tol * (Scalar(1) + z)) break;
    if (dp.derivative > Scalar(0)) lo = lambda; else hi = lambda;
    if (hi - lo <= Scalar(4) * std::numeric_limits<Scalar>::epsilon() * (Scalar(1) + abs(lambda)))
      break;
    Scalar next = lo + (hi - lo) / Scalar(2);
    const Scalar s2 = dp.derivative + z;
    if (s2 > Scalar(0) && z > Scalar(0)) {
      const Scalar s = sqrt(s2), rz = sqrt(z);
      const Scalar sigma = Scalar(1) / s - Scalar(1) / rz;
      const Scalar dz = Scalar(2) * z / ((prob.p - Scalar(2)) * lambda);
      const Scalar dsigma =
          -dual.squared_norm_slope(lambda) / (Scalar(2) * s2 * s) + dz / (Scalar(2) * z * rz);
      const Scalar newton = lambda - sigma / dsigma;
      if (newton > lo && newton < hi) next = newton;
    }
    lambda = next;
  }
  if (iter >= opts.max_iter)
    throw NoConvergence("prs: iteration limit reached", double(lambda), iter);
  *iterations = iter;
  return lambda;
}

}  // namespace detail

/// Global minimizer of x^T A x + b^T x + rho |x|^p through its univariate
/// concave dual. The dual optimum lambda* is either interior (x* is the
/// stationary point of the shifted quadratic) or sits at -lambda_min(A) (hard
/// case, completed along the lambda_min eigenvector to |x*|^2 = z*).
template <typename Scalar>
PrsSolution<Scalar> solve_prs(const PrsProblem<Scalar>& prob, const SolverOptions& opts = {}) {
  using std::abs;
  const PrsDual<Scalar> dual(prob);
  const bool convex = dual.eig().lambda_min() >= Scalar(0);

  PrsSolution<Scalar> sol;
  bool boundary = false;
  if (dual.lower_bound_admissible() && dual(dual.lower_bound()).derivative <= Scalar(0)) {
    boundary = true;
    sol.lambda_star = dual.lower_bound();
  } else {
    sol.lambda_star = detail::maximize_prs_dual(dual, opts, &sol.iterations);
  }
  sol.z_star = phi_argmin(sol.lambda_star, prob.p, prob.rho);

  if (boundary) {
    if (sol.z_star == Scalar(0)) {
      sol.x = Vector<Scalar>::Zero(prob.dim());
    } else {
      TrsRequest<Scalar> req{prob.A, prob.b, sol.z_star, TrsConstraint::Sphere, TrsSense::Min};
      sol.x = solve_trs(req, dual.eig()).x;
    }
    sol.prs_case = convex ? PrsCase::Convex : PrsCase::Hard;
  } else {
    sol.x = dual.x_at(sol.lambda_star);
    sol.prs_case = convex ? PrsCase::Convex : PrsCase::Easy;
  }

  sol.value = evaluate_objective(prob, sol.x);
  sol.dual_value = dual(sol.lambda_star).value;
  sol.dual_gap_bound = abs(sol.value - sol.dual_value);
  sol.certificate =
      prs_certificate(prob, sol.lambda_star, sol.value, Scalar(opts.certificate_tol));
  return sol;
}

}  // namespace hcx
