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
// Dense symmetric linear algebra shared by every solver: eigendecomposition
// with a fixed sign convention, shifted pseudoinverse application, membership
// tests against the range of A - lambda_min(A) I, spectral norms and PSD
// verdicts.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "hcx/errors.hpp"

namespace hcx {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Relative clustering width used to identify the lambda_min eigenspace.
inline constexpr double kClusterTol = 1e-9;

template <typename Derived>
typename Derived::Scalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  return m.size() == 0 ? Scalar(0) : m.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.array().isFinite().all();
}

/// Dense symmetric matrix. Construction symmetrizes via (M + M^T) / 2 and
/// rejects non-square or non-finite input, so every instance satisfies
/// entries(i, j) == entries(j, i) bit for bit.
template <typename Scalar>
class SymMatrix {
 public:
  SymMatrix() = default;

  template <typename Derived>
  explicit SymMatrix(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() != m.cols()) throw InvalidInput("SymMatrix: matrix must be square");
    if (m.rows() == 0) throw InvalidInput("SymMatrix: dimension must be positive");
    if (!all_finite(m)) throw InvalidInput("SymMatrix: entries must be finite");
    const Matrix<Scalar> dense = m.template cast<Scalar>();
    m_ = (dense + dense.transpose()) / Scalar(2);
  }

  const Matrix<Scalar>& matrix() const { return m_; }
  Eigen::Index size() const { return m_.rows(); }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  Matrix<Scalar> m_;
};

template <typename Derived>
SymMatrix(const Eigen::MatrixBase<Derived>&) -> SymMatrix<typename Derived::Scalar>;

/// Eigendecomposition M = Q diag(eigenvalues) Q^T with ascending eigenvalues.
template <typename Scalar>
struct SymEig {
  Vector<Scalar> eigenvalues;
  Matrix<Scalar> eigenvectors;

  Eigen::Index size() const { return eigenvalues.size(); }
  Scalar lambda_min() const { return eigenvalues(0); }
  Scalar lambda_max() const { return eigenvalues(eigenvalues.size() - 1); }

  /// max(1, max_i |lambda_i|); the reference magnitude for relative tolerances.
  Scalar scale() const {
    using std::max;
    return max(Scalar(1), eigenvalues.cwiseAbs().maxCoeff());
  }

  /// Number of leading eigenvalues within kClusterTol * scale() of lambda_min.
  Eigen::Index min_cluster_size() const {
    const Scalar cutoff = lambda_min() + Scalar(kClusterTol) * scale();
    Eigen::Index k = 0;
    while (k < size() && eigenvalues(k) <= cutoff) ++k;
    return k;
  }
};

template <typename Scalar>
SymEig<Scalar> eigh(const SymMatrix<Scalar>& m) {
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(m.matrix());
  if (solver.info() != Eigen::Success) throw InvalidInput("eigh: decomposition failed");
  SymEig<Scalar> out{solver.eigenvalues(), solver.eigenvectors()};
  // Sign convention: the first non-negligible component of each column is >= 0.
  const Scalar negligible = Scalar(64) * std::numeric_limits<Scalar>::epsilon();
  for (Eigen::Index j = 0; j < out.eigenvectors.cols(); ++j) {
    auto col = out.eigenvectors.col(j);
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      using std::abs;
      if (abs(col(i)) > negligible) {
        if (col(i) < Scalar(0)) col = -col;
        break;
      }
    }
  }
  return out;
}

template <typename Derived>
auto eigh(const Eigen::MatrixBase<Derived>& m) {
  return eigh(SymMatrix<typename Derived::Scalar>(m));
}

/// Applies (M + shift I)^+ to v. Components whose shifted eigenvalue is within
/// tol * max(1, max_i |lambda_i + shift|) of zero are dropped.
template <typename Scalar, typename Derived>
Vector<Scalar> apply_shifted_pinv(const SymEig<Scalar>& e, Scalar shift,
                                  const Eigen::MatrixBase<Derived>& v, Scalar tol) {
  using std::abs;
  using std::max;
  const Vector<Scalar> shifted = e.eigenvalues.array() + shift;
  const Scalar scale = max(Scalar(1), shifted.cwiseAbs().maxCoeff());
  Vector<Scalar> coeffs = e.eigenvectors.transpose() * v;
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    coeffs(i) = abs(shifted(i)) > tol * scale ? coeffs(i) / shifted(i) : Scalar(0);
  }
  return e.eigenvectors * coeffs;
}

/// Norm of the component of v inside the lambda_min eigenspace.
template <typename Scalar, typename Derived>
Scalar min_eigenspace_projection(const SymEig<Scalar>& e, const Eigen::MatrixBase<Derived>& v) {
  const Eigen::Index k = e.min_cluster_size();
  return (e.eigenvectors.leftCols(k).transpose() * v).norm();
}

/// True iff v lies in Range(M - lambda_min(M) I), i.e. its projection onto
/// the lambda_min eigenspace has norm <= tol * (1 + |v|).
template <typename Scalar, typename Derived>
bool range_membership(const SymEig<Scalar>& e, const Eigen::MatrixBase<Derived>& v, Scalar tol) {
  return min_eigenspace_projection(e, v) <= tol * (Scalar(1) + v.norm());
}

/// Largest singular value of a general dense matrix.
template <typename Derived>
typename Derived::Scalar spectral_norm(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.size() == 0) return Scalar(0);
  Eigen::JacobiSVD<Matrix<Scalar>> svd(m);
  return svd.singularValues()(0);
}

template <typename Scalar>
struct PsdVerdict {
  bool is_psd = false;
  Scalar min_eigenvalue = 0;
  Scalar tolerance_used = 0;
};

/// PSD test on the smallest eigenvalue, with tolerance tol * max(1, |M|_max).
template <typename Scalar>
PsdVerdict<Scalar> psd_check(const SymMatrix<Scalar>& m, Scalar tol) {
  using std::max;
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(m.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw InvalidInput("psd_check: decomposition failed");
  PsdVerdict<Scalar> v;
  v.min_eigenvalue = solver.eigenvalues()(0);
  v.tolerance_used = tol * max(Scalar(1), max_abs(m.matrix()));
  v.is_psd = v.min_eigenvalue >= -v.tolerance_used;
  return v;
}

}  // namespace hcx
