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
//
// Trust-region subproblems
//
//   min / max  x^T Q x + c^T x   s.t.  |x|^2 <= r^2   (ball, min only)
//                                      |x|^2  = r^2   (sphere)
//
// solved globally in the eigenbasis of Q. The multiplier mu of the
// min-sphere problem satisfies 2 (Q + mu I) x + c = 0, Q + mu I >= 0, and is
// located by safeguarded Newton on the secular equation |x(mu)| = r. The
// hard case (c orthogonal to the lambda_min eigenspace and |x(-lambda_min)|
// short of r) is completed by an eigenvector step.

#pragma once

#include <cmath>
#include <limits>

#include "hcx/linalg.hpp"

namespace hcx {

enum class TrsConstraint { Ball, Sphere };
enum class TrsSense { Min, Max };
enum class TrsCase { Interior, EasyBoundary, HardBoundary };

inline const char* to_string(TrsCase c) {
  switch (c) {
    case TrsCase::Interior: return "interior";
    case TrsCase::EasyBoundary: return "easy_boundary";
    case TrsCase::HardBoundary: return "hard_boundary";
  }
  return "unknown";
}

/// Hard-case threshold on the lambda_min-eigenspace component of the linear term.
inline constexpr double kHardCaseTol = 1e-8;

template <typename Scalar>
struct TrsRequest {
  SymMatrix<Scalar> Q;
  Vector<Scalar> c;
  Scalar radius_sq = 1;
  TrsConstraint constraint = TrsConstraint::Sphere;
  TrsSense sense = TrsSense::Min;
};

/// For sense Max the reported multiplier belongs to the negated problem, so
/// stationarity reads 2 (Q - multiplier I) x + c = 0.
template <typename Scalar>
struct TrsResult {
  Vector<Scalar> x;
  Scalar multiplier = 0;
  Scalar objective = 0;
  TrsCase trs_case = TrsCase::Interior;
  Scalar kkt_residual = 0;
  int iterations = 0;
};

template <typename Scalar>
struct KktReport {
  Scalar residual = 0;
  bool second_order_ok = false;
  Scalar min_eigenvalue = 0;  // of Q + mu I (min) or mu I - Q (max)
};

namespace detail {

template <typename Scalar>
void validate(const TrsRequest<Scalar>& req) {
  using std::isfinite;
  if (req.c.size() != req.Q.size()) throw InvalidInput("trs: dimension mismatch between Q and c");
  if (!all_finite(req.c)) throw InvalidInput("trs: c must be finite");
  if (!isfinite(req.radius_sq) || !(req.radius_sq > Scalar(0)))
    throw InvalidInput("trs: radius_sq must be positive and finite");
  if (req.constraint == TrsConstraint::Ball && req.sense == TrsSense::Max)
    throw InvalidInput("trs: ball constraint is only supported for minimization");
}

template <typename Scalar>
Scalar squared_norm_at(const Vector<Scalar>& lambda, const Vector<Scalar>& g, Scalar mu,
                       Scalar* derivative) {
  Scalar s2 = 0, ds2 = 0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (g(i) == Scalar(0)) continue;
    const Scalar d = lambda(i) + mu;
    const Scalar yi = g(i) / (Scalar(2) * d);
    s2 += yi * yi;
    ds2 -= Scalar(2) * yi * yi / d;
  }
  if (derivative) *derivative = ds2;
  return s2;
}

/// Minimizes y^T diag(lambda) y + g^T y on |y|^2 = r2 in eigen coordinates.
template <typename Scalar>
TrsResult<Scalar> min_sphere_eigen(const SymEig<Scalar>& e, Vector<Scalar> g, Scalar r2) {
  using std::abs;
  using std::sqrt;
  const Vector<Scalar>& lambda = e.eigenvalues;
  const Eigen::Index n = lambda.size();
  const Eigen::Index k = e.min_cluster_size();
  const Scalar lam_min = e.lambda_min();
  const Scalar g_norm = g.norm();

  TrsResult<Scalar> out;
  if (g.head(k).norm() <= Scalar(kHardCaseTol) * (Scalar(1) + g_norm)) {
    g.head(k).setZero();
    Vector<Scalar> y = Vector<Scalar>::Zero(n);
    for (Eigen::Index i = k; i < n; ++i) y(i) = -g(i) / (Scalar(2) * (lambda(i) - lam_min));
    const Scalar ybar2 = y.squaredNorm();
    if (ybar2 <= r2) {
      y(0) = sqrt(r2 - ybar2);
      out.x = std::move(y);
      out.multiplier = -lam_min;
      out.trs_case = TrsCase::HardBoundary;
      return out;
    }
  }

  // Secular equation. With the cluster zeroed |y(mu)| stays finite at the
  // pole, otherwise it blows up there; either way |y| is decreasing on
  // (-lambda_min, inf) and the root is bracketed by [lo, hi].
  Scalar lo = -lam_min;
  Scalar hi = -lam_min + g_norm / (Scalar(2) * sqrt(r2)) + Scalar(1);
  const Scalar r = sqrt(r2);
  const Scalar tol = Scalar(1e-10) * (Scalar(1) + r2);
  Scalar mu = hi;
  int iter = 0;
  for (; iter < 100; ++iter) {
    Scalar ds2 = 0;
    const Scalar s2 = squared_norm_at(lambda, g, mu, &ds2);
    if (abs(s2 - r2) <= tol) break;
    if (s2 > r2) lo = mu; else hi = mu;
    // Newton on 1/|y(mu)| - 1/r, which is concave and increasing in mu.
    const Scalar s = sqrt(s2);
    const Scalar sigma = Scalar(1) / s - Scalar(1) / r;
    const Scalar dsigma = -ds2 / (Scalar(2) * s2 * s);
    Scalar next = mu - sigma / dsigma;
    if (!(next > lo && next < hi)) next = lo + (hi - lo) / Scalar(2);
    if (hi - lo <= Scalar(4) * std::numeric_limits<Scalar>::epsilon() * (Scalar(1) + abs(mu))) break;
    mu = next;
  }
  Vector<Scalar> y(n);
  for (Eigen::Index i = 0; i < n; ++i)
    y(i) = g(i) == Scalar(0) ? Scalar(0) : -g(i) / (Scalar(2) * (lambda(i) + mu));
  const Scalar yn = y.norm();
  if (yn > Scalar(0)) y *= r / yn;
  out.x = std::move(y);
  out.multiplier = mu;
  out.trs_case = TrsCase::EasyBoundary;
  out.iterations = iter;
  return out;
}

template <typename Scalar>
Scalar quadratic_value(const Matrix<Scalar>& Q, const Vector<Scalar>& c, const Vector<Scalar>& x) {
  return x.dot(Q * x) + c.dot(x);
}

}  // namespace detail

/// Solves a trust-region request using a precomputed eigendecomposition of Q.
template <typename Scalar>
TrsResult<Scalar> solve_trs(const TrsRequest<Scalar>& req, const SymEig<Scalar>& eig) {
  detail::validate(req);
  const Matrix<Scalar>& Q = req.Q.matrix();
  const Vector<Scalar> g = eig.eigenvectors.transpose() * req.c;

  TrsResult<Scalar> out;
  if (req.sense == TrsSense::Max) {
    SymEig<Scalar> neg{-eig.eigenvalues.reverse(), eig.eigenvectors.rowwise().reverse()};
    out = detail::min_sphere_eigen(neg, Vector<Scalar>(-g.reverse()), req.radius_sq);
    out.x = neg.eigenvectors * out.x;
    // Objective of the negated problem, negated exactly.
    out.objective = -detail::quadratic_value<Scalar>(-Q, -req.c, out.x);
    out.kkt_residual = (Scalar(2) * (Q * out.x - out.multiplier * out.x) + req.c).norm() /
                       (Scalar(1) + req.c.norm());
    return out;
  }

  if (req.constraint == TrsConstraint::Ball &&
      eig.lambda_min() >= -Scalar(kClusterTol) * eig.scale()) {
    const Vector<Scalar> x =
        -apply_shifted_pinv(eig, Scalar(0), req.c, Scalar(kClusterTol)) / Scalar(2);
    const Scalar stationarity = (Scalar(2) * (Q * x) + req.c).norm();
    if (stationarity <= Scalar(kHardCaseTol) * (Scalar(1) + req.c.norm()) &&
        x.squaredNorm() <= req.radius_sq) {
      out.x = x;
      out.multiplier = 0;
      out.trs_case = TrsCase::Interior;
      out.objective = detail::quadratic_value(Q, req.c, out.x);
      out.kkt_residual = stationarity / (Scalar(1) + req.c.norm());
      return out;
    }
  }

  out = detail::min_sphere_eigen(eig, g, req.radius_sq);
  out.x = eig.eigenvectors * out.x;
  out.objective = detail::quadratic_value(Q, req.c, out.x);
  out.kkt_residual = (Scalar(2) * (Q * out.x + out.multiplier * out.x) + req.c).norm() /
                     (Scalar(1) + req.c.norm());
  return out;
}

template <typename Scalar>
TrsResult<Scalar> solve_trs(const TrsRequest<Scalar>& req) {
  return solve_trs(req, eigh(req.Q));
}

/// Recomputes stationarity and the second-order condition for a returned
/// result: Q + mu I >= 0 for minimization, mu I - Q >= 0 for maximization.
template <typename Scalar>
KktReport<Scalar> kkt_report(const TrsRequest<Scalar>& req, const TrsResult<Scalar>& res,
                             Scalar psd_tol = Scalar(1e-8)) {
  const Matrix<Scalar>& Q = req.Q.matrix();
  const Eigen::Index n = Q.rows();
  const Matrix<Scalar> I = Matrix<Scalar>::Identity(n, n);
  const bool is_max = req.sense == TrsSense::Max;
  const Scalar mu_hat = is_max ? -res.multiplier : res.multiplier;
  KktReport<Scalar> rep;
  rep.residual = (Scalar(2) * (Q * res.x + mu_hat * res.x) + req.c).norm() /
                 (Scalar(1) + req.c.norm());
  const Matrix<Scalar> curvature = is_max ? Matrix<Scalar>(res.multiplier * I - Q)
                                          : Matrix<Scalar>(Q + res.multiplier * I);
  const auto verdict = psd_check(SymMatrix<Scalar>(curvature), psd_tol);
  rep.min_eigenvalue = verdict.min_eigenvalue;
  rep.second_order_ok = verdict.is_psd;
  if (req.constraint == TrsConstraint::Ball && res.multiplier < -psd_tol) rep.second_order_ok = false;
  return rep;
}

}  // namespace hcx
