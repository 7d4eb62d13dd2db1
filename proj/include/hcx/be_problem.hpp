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
// Normwise backward error
//
//   min_x |Ax - b| / (|A| |x| + |b|)
//
// and its univariate convex dual. Writing q(lambda) = b^T A (A^T A - lambda I)^+ A^T b,
//
//   F(lambda) = |A|^2 / lambda + |b|^2 / (|b|^2 - q(lambda)),
//
// the squared optimal ratio is 1 / inf F over 0 < lambda < lambda_min(A^T A)
// (closed at the right end when A^T b has no component in the lambda_min
// eigenspace) restricted to q(lambda) < |b|^2.

#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "hcx/linalg.hpp"
#include "hcx/trs.hpp"

namespace hcx {

template <typename Scalar>
struct BeProblem {
  Matrix<Scalar> A;
  Vector<Scalar> b;

  void validate() const {
    if (A.rows() == 0 || A.cols() == 0) throw InvalidInput("be: A must be non-empty");
    if (b.size() != A.rows()) throw InvalidInput("be: dim(b) must equal rows(A)");
    if (!all_finite(A) || !all_finite(b)) throw InvalidInput("be: entries must be finite");
    if (!(spectral_norm(A) > Scalar(0))) throw InvalidInput("be: |A| must be positive");
  }
};

/// |Ax - b| / (|A| |x| + |b|). Requires a positive denominator.
template <typename Scalar>
Scalar evaluate_ratio(const BeProblem<Scalar>& prob, const Vector<Scalar>& x) {
  const Scalar denom = spectral_norm(prob.A) * x.norm() + prob.b.norm();
  if (!(denom > Scalar(0))) throw DomainError("evaluate_ratio: |A||x| + |b| must be positive");
  return (prob.A * x - prob.b).norm() / denom;
}

template <typename Scalar>
struct BeDualPoint {
  Scalar value = 0;       // F(lambda)
  Scalar derivative = 0;  // F'(lambda)
  Scalar curvature = 0;   // F''(lambda)
  Scalar q = 0;           // b^T A (A^T A - lambda I)^+ A^T b
};

/// F with cached spectral data of A^T A. The admissible interval is
/// (0, right_end()) or (0, right_end()] when right_end_closed().
template <typename Scalar>
class BeDual {
 public:
  explicit BeDual(const BeProblem<Scalar>& prob) : prob_(prob) {
    prob_.validate();
    norm_a_ = spectral_norm(prob_.A);
    norm_b2_ = prob_.b.squaredNorm();
    eig_ = eigh(SymMatrix<Scalar>(prob_.A.transpose() * prob_.A));
    const Vector<Scalar> atb = prob_.A.transpose() * prob_.b;
    g_ = eig_.eigenvectors.transpose() * atb;
    hard_branch_ = range_membership(eig_, atb, Scalar(kHardCaseTol));
    if (hard_branch_) g_.head(eig_.min_cluster_size()).setZero();
    lam_min_ = eig_.lambda_min();
    empty_ = !(lam_min_ > Scalar(kClusterTol) * eig_.scale()) || !(norm_b2_ > Scalar(0));
    if (!empty_) locate_right_end();
  }

  const BeProblem<Scalar>& problem() const { return prob_; }
  const SymEig<Scalar>& eig() const { return eig_; }
  Scalar norm_a() const { return norm_a_; }
  Scalar norm_b_sq() const { return norm_b2_; }
  bool hard_branch() const { return hard_branch_; }
  bool empty() const { return empty_; }
  Scalar right_end() const { return right_; }
  bool right_end_closed() const { return right_closed_; }
  /// Largest sampled lambda with q(lambda) < |b|^2 when the right end is open.
  Scalar last_positive() const { return last_positive_; }

  Scalar q_at(Scalar lambda, Scalar* dq = nullptr, Scalar* d2q = nullptr) const {
    Scalar q = 0, q1 = 0, q2 = 0;
    for (Eigen::Index i = 0; i < g_.size(); ++i) {
      if (g_(i) == Scalar(0)) continue;
      const Scalar d = eig_.eigenvalues(i) - lambda;
      if (d == Scalar(0)) continue;
      const Scalar gi2 = g_(i) * g_(i);
      q += gi2 / d;
      q1 += gi2 / (d * d);
      q2 += Scalar(2) * gi2 / (d * d * d);
    }
    if (dq) *dq = q1;
    if (d2q) *d2q = q2;
    return q;
  }

  void check_domain(Scalar lambda) const {
    using std::isfinite;
    if (empty_) throw DomainError("be dual: admissible interval is empty");
    const bool inside = isfinite(lambda) && lambda > Scalar(0) &&
                        (lambda < right_ || (right_closed_ && lambda == right_));
    if (!inside)
      throw DomainError("be dual: lambda " + std::to_string(double(lambda)) +
                        " outside admissible interval (0, " + std::to_string(double(right_)) +
                        (right_closed_ ? "]" : ")"));
  }

  /// Evaluates F, raising DomainError outside the interval or where the
  /// denominator |b|^2 - q(lambda) is not positive.
  BeDualPoint<Scalar> operator()(Scalar lambda) const {
    if (empty_ || !(lambda > Scalar(0)) || lambda > lam_min_ ||
        (lambda == lam_min_ && !hard_branch_))
      throw DomainError("be dual: lambda " + std::to_string(double(lambda)) +
                        " outside (0, lambda_min(A^T A))");
    Scalar dq = 0, d2q = 0;
    const Scalar q = q_at(lambda, &dq, &d2q);
    const Scalar denom = norm_b2_ - q;
    if (!(denom > Scalar(0)))
      throw DomainError("be dual: denominator |b|^2 - q(lambda) is not positive at lambda " +
                        std::to_string(double(lambda)));
    const Scalar a2 = norm_a_ * norm_a_;
    BeDualPoint<Scalar> out;
    out.q = q;
    out.value = a2 / lambda + norm_b2_ / denom;
    out.derivative = -a2 / (lambda * lambda) + norm_b2_ * dq / (denom * denom);
    out.curvature = Scalar(2) * a2 / (lambda * lambda * lambda) +
                    norm_b2_ * (d2q / (denom * denom) + Scalar(2) * dq * dq / (denom * denom * denom));
    return out;
  }

 private:
  // q is increasing on (0, lambda_min), so {q < |b|^2} is an interval
  // starting at 0; its right end is found by bisection.
  void locate_right_end() {
    if (!(q_at(Scalar(0)) < norm_b2_)) {
      empty_ = true;
      return;
    }
    if (hard_branch_ && q_at(lam_min_) < norm_b2_) {
      right_ = lam_min_;
      right_closed_ = true;
      last_positive_ = lam_min_;
      return;
    }
    Scalar lo = 0, hi = lam_min_;
    for (int i = 0; i < 400 && hi - lo > std::numeric_limits<Scalar>::epsilon() * hi; ++i) {
      const Scalar mid = lo + (hi - lo) / Scalar(2);
      if (mid <= lo || mid >= hi) break;
      if (q_at(mid) < norm_b2_) lo = mid; else hi = mid;
    }
    right_ = hi;
    right_closed_ = false;
    last_positive_ = lo;
  }

  BeProblem<Scalar> prob_;
  Scalar norm_a_ = 0;
  Scalar norm_b2_ = 0;
  SymEig<Scalar> eig_;
  Vector<Scalar> g_;
  Scalar lam_min_ = 0;
  bool hard_branch_ = false;
  bool empty_ = true;
  Scalar right_ = 0;
  bool right_closed_ = false;
  Scalar last_positive_ = 0;
};

template <typename Scalar>
BeDualPoint<Scalar> be_dual_value(Scalar lambda, const BeProblem<Scalar>& prob) {
  return BeDual<Scalar>(prob)(lambda);
}

}  // namespace hcx
