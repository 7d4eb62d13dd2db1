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
// PSD block-matrix certificates. A quadratic x^T M x + 2 m^T x + c is
// nonnegative on all of R^n iff [[M, m], [m^T, c]] >= 0, so a PSD verdict on
//
//   p-regularized:   [[A + lambda I, b/2], [b^T/2, -t + Phi(lambda)]]
//   backward error:  [[A^T A - lambda I, -A^T b], [-b^T A, w]]
//
// proves the global lower bound h(x) >= t, respectively the ratio bound
// implied by (lambda, w).

#pragma once

#include <cmath>

#include "hcx/be_problem.hpp"
#include "hcx/linalg.hpp"
#include "hcx/prs_problem.hpp"

namespace hcx {

enum class CertificateKind { PRS, BE };

inline const char* to_string(CertificateKind k) { return k == CertificateKind::PRS ? "prs" : "be"; }

inline constexpr double kDefaultCertificateTol = 1e-8;

template <typename Scalar>
struct CertificateReport {
  CertificateKind kind = CertificateKind::PRS;
  SymMatrix<Scalar> block_matrix;
  Scalar min_eigenvalue = 0;
  bool verdict = false;
  Scalar tolerance_used = 0;
  Scalar lambda = 0;
  Scalar parameter = 0;  // t for PRS, w for BE
};

namespace detail {

template <typename Scalar>
CertificateReport<Scalar> finish_certificate(CertificateKind kind, const Matrix<Scalar>& block,
                                             Scalar lambda, Scalar parameter, Scalar tol) {
  CertificateReport<Scalar> rep;
  rep.kind = kind;
  rep.block_matrix = SymMatrix<Scalar>(block);
  rep.lambda = lambda;
  rep.parameter = parameter;
  // Verdict tolerance is tol * (1 + |M|_max).
  const auto v = psd_check(rep.block_matrix, Scalar(1));
  rep.min_eigenvalue = v.min_eigenvalue;
  rep.tolerance_used = tol * (Scalar(1) + max_abs(rep.block_matrix.matrix()));
  rep.verdict = rep.min_eigenvalue >= -rep.tolerance_used;
  return rep;
}

}  // namespace detail

template <typename Scalar>
CertificateReport<Scalar> prs_certificate(const PrsProblem<Scalar>& prob, Scalar lambda, Scalar t,
                                          Scalar tol = Scalar(kDefaultCertificateTol)) {
  using std::isfinite;
  prob.validate();
  if (!isfinite(lambda) || lambda < Scalar(0)) throw InvalidInput("prs_certificate: lambda must be >= 0");
  if (!isfinite(t)) throw InvalidInput("prs_certificate: t must be finite");
  const Eigen::Index n = prob.dim();
  Matrix<Scalar> block(n + 1, n + 1);
  block.topLeftCorner(n, n) = prob.A.matrix() + lambda * Matrix<Scalar>::Identity(n, n);
  block.topRightCorner(n, 1) = prob.b / Scalar(2);
  block.bottomLeftCorner(1, n) = prob.b.transpose() / Scalar(2);
  block(n, n) = -t + phi(lambda, prob.p, prob.rho).value;
  return detail::finish_certificate(CertificateKind::PRS, block, lambda, t, tol);
}

template <typename Scalar>
CertificateReport<Scalar> be_certificate(const BeProblem<Scalar>& prob, Scalar lambda, Scalar w,
                                         Scalar tol = Scalar(kDefaultCertificateTol)) {
  using std::isfinite;
  prob.validate();
  if (!isfinite(lambda) || !isfinite(w)) throw InvalidInput("be_certificate: lambda and w must be finite");
  const Eigen::Index n = prob.A.cols();
  const Vector<Scalar> atb = prob.A.transpose() * prob.b;
  Matrix<Scalar> block(n + 1, n + 1);
  block.topLeftCorner(n, n) =
      prob.A.transpose() * prob.A - lambda * Matrix<Scalar>::Identity(n, n);
  block.topRightCorner(n, 1) = -atb;
  block.bottomLeftCorner(1, n) = -atb.transpose();
  block(n, n) = w;
  return detail::finish_certificate(CertificateKind::BE, block, lambda, w, tol);
}

/// w = |b|^2 - t |b|^2 - t^2 |A|^2 |b|^2 / (lambda - t |A|^2), the value that
/// maps the ratio bound t at multiplier lambda onto the BE block matrix.
template <typename Scalar>
Scalar be_w_from_t(Scalar norm_a, Scalar norm_b_sq, Scalar lambda, Scalar t) {
  const Scalar a2 = norm_a * norm_a;
  return norm_b_sq - t * norm_b_sq - t * t * a2 * norm_b_sq / (lambda - t * a2);
}

}  // namespace hcx
