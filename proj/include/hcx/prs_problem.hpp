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
// The p-regularized subproblem
//
//   min_x  h(x) = x^T A x + b^T x + rho |x|^p,   p > 2, rho > 0,
//
// and its univariate concave dual
//
//   d(lambda) = Phi(lambda) - b^T (A + lambda I)^+ b / 4,
//   Phi(lambda) = min_{z >= 0} rho z^{p/2} - lambda z,
//
// over lambda >= max(0, -lambda_min(A)).

#pragma once

#include <cmath>
#include <string>

#include "hcx/linalg.hpp"
#include "hcx/trs.hpp"

namespace hcx {

template <typename Scalar>
struct PrsProblem {
  SymMatrix<Scalar> A;
  Vector<Scalar> b;
  Scalar p = 3;
  Scalar rho = 1;

  Eigen::Index dim() const { return A.size(); }

  void validate() const {
    using std::isfinite;
    if (b.size() != A.size()) throw InvalidInput("prs: dimension mismatch between A and b");
    if (!all_finite(b)) throw InvalidInput("prs: b must be finite");
    if (!isfinite(p) || !(p > Scalar(2))) throw InvalidInput("prs: p must be finite and > 2");
    if (!isfinite(rho) || !(rho > Scalar(0))) throw InvalidInput("prs: rho must be finite and > 0");
  }
};

template <typename Scalar>
struct PhiValue {
  Scalar value = 0;
  Scalar derivative = 0;
};

/// Minimizer of rho z^{p/2} - lambda z over z >= 0: (2 lambda / (p rho))^{2/(p-2)}.
template <typename Scalar>
Scalar phi_argmin(Scalar lambda, Scalar p, Scalar rho) {
  using std::pow;
  if (!(lambda >= Scalar(0))) throw InvalidInput("phi: lambda must be >= 0");
  if (lambda == Scalar(0)) return Scalar(0);
  return pow(Scalar(2) * lambda / (p * rho), Scalar(2) / (p - Scalar(2)));
}

/// Phi(lambda) = min_{z >= 0} rho z^{p/2} - lambda z and its derivative -z_opt(lambda).
template <typename Scalar>
PhiValue<Scalar> phi(Scalar lambda, Scalar p, Scalar rho) {
  const Scalar z = phi_argmin(lambda, p, rho);
  // At the minimizer rho z^{p/2} = (2/p) lambda z.
  return {-lambda * z * (p - Scalar(2)) / p, -z};
}

template <typename Scalar>
Scalar evaluate_objective(const PrsProblem<Scalar>& prob, const Vector<Scalar>& x) {
  using std::pow;
  const Matrix<Scalar>& A = prob.A.matrix();
  return x.dot(A * x) + prob.b.dot(x) + prob.rho * pow(x.norm(), prob.p);
}

template <typename Scalar>
struct DualPoint {
  Scalar value = 0;
  Scalar derivative = 0;
};

/// Dual function with cached spectral data. On the range branch the
/// lambda_min-eigenspace component of b (below the hard-case threshold) is
/// dropped, so d stays finite at the left endpoint.
template <typename Scalar>
class PrsDual {
 public:
  explicit PrsDual(const PrsProblem<Scalar>& prob) : PrsDual(prob, eigh(prob.A)) {}

  PrsDual(const PrsProblem<Scalar>& prob, SymEig<Scalar> eig)
      : prob_(prob), eig_(std::move(eig)) {
    using std::max;
    prob_.validate();
    g_ = eig_.eigenvectors.transpose() * prob_.b;
    lower_ = max(Scalar(0), -eig_.lambda_min());
    const bool near_singular = eig_.lambda_min() <= Scalar(kClusterTol) * eig_.scale();
    if (near_singular) {
      in_range_ = range_membership(eig_, prob_.b, Scalar(kHardCaseTol));
      if (in_range_) g_.head(eig_.min_cluster_size()).setZero();
    }
    lower_admissible_ = !near_singular || in_range_;
  }

  const PrsProblem<Scalar>& problem() const { return prob_; }
  const SymEig<Scalar>& eig() const { return eig_; }

  /// max(0, -lambda_min(A)).
  Scalar lower_bound() const { return lower_; }
  /// False on the open branch, where d -> -inf at the lower bound.
  bool lower_bound_admissible() const { return lower_admissible_; }
  /// b in Range(A - lambda_min I) (only decided when A is not clearly PD).
  bool b_in_range() const { return in_range_; }

  void check_domain(Scalar lambda) const {
    using std::isfinite;
    if (!isfinite(lambda) || lambda < lower_ || (lambda == lower_ && !lower_admissible_))
      throw DomainError("prs dual: lambda " + std::to_string(double(lambda)) +
                        " outside admissible domain (lower bound " + std::to_string(double(lower_)) +
                        (lower_admissible_ ? ", closed)" : ", open)"));
  }

  /// x(lambda) = -(A + lambda I)^+ b / 2 in eigen coordinates.
  Vector<Scalar> eigen_coords_at(Scalar lambda) const {
    Vector<Scalar> y = Vector<Scalar>::Zero(g_.size());
    for (Eigen::Index i = 0; i < g_.size(); ++i) {
      const Scalar d = eig_.eigenvalues(i) + lambda;
      if (g_(i) != Scalar(0) && d != Scalar(0)) y(i) = -g_(i) / (Scalar(2) * d);
    }
    return y;
  }

  Vector<Scalar> x_at(Scalar lambda) const { return eig_.eigenvectors * eigen_coords_at(lambda); }

  /// d(lambda) and d'(lambda) = |x(lambda)|^2 - z_opt(lambda).
  DualPoint<Scalar> operator()(Scalar lambda) const {
    check_domain(lambda);
    const Vector<Scalar> y = eigen_coords_at(lambda);
    const PhiValue<Scalar> ph = phi(lambda, prob_.p, prob_.rho);
    // b^T (A + lambda I)^+ b / 4 = sum g_i^2 / (4 (lambda_i + lambda)) = -g^T y / 2.
    return {ph.value + g_.dot(y) / Scalar(2), y.squaredNorm() + ph.derivative};
  }

  /// Derivative of |x(lambda)|^2 with respect to lambda.
  Scalar squared_norm_slope(Scalar lambda) const {
    const Vector<Scalar> y = eigen_coords_at(lambda);
    Scalar s = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (y(i) != Scalar(0)) s -= Scalar(2) * y(i) * y(i) / (eig_.eigenvalues(i) + lambda);
    }
    return s;
  }

 private:
  PrsProblem<Scalar> prob_;
  SymEig<Scalar> eig_;
  Vector<Scalar> g_;
  Scalar lower_ = 0;
  bool in_range_ = false;
  bool lower_admissible_ = true;
};

template <typename Scalar>
DualPoint<Scalar> dual_value(Scalar lambda, const PrsProblem<Scalar>& prob) {
  return PrsDual<Scalar>(prob)(lambda);
}

}  // namespace hcx
