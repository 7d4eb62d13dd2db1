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
// Sampling probe for convexity of the joint range
//
//   M = {(f(x), g(x)) : x in R^n},  f = x^T A x + a^T x + p,  g = x^T B x + b^T x + q.
//
// Midpoints of sampled pairs of image points are pushed back through the
// map with Levenberg-Marquardt. A midpoint that cannot be realized witnesses
// nonconvexity; realizing all of them is evidence, not proof, of convexity.
// For homogeneous pairs the range is always convex.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "hcx/linalg.hpp"

namespace hcx {

template <typename Scalar>
struct QuadraticPair {
  SymMatrix<Scalar> A, B;
  Vector<Scalar> a, b;
  Scalar p = 0, q = 0;

  Eigen::Index dim() const { return A.size(); }

  void validate() const {
    const Eigen::Index n = A.size();
    if (B.size() != n || a.size() != n || b.size() != n)
      throw InvalidInput("quadratic pair: dimension mismatch");
    if (!all_finite(a) || !all_finite(b) || !std::isfinite(double(p)) || !std::isfinite(double(q)))
      throw InvalidInput("quadratic pair: entries must be finite");
  }

  Eigen::Matrix<Scalar, 2, 1> operator()(const Vector<Scalar>& x) const {
    return {x.dot(A.matrix() * x) + a.dot(x) + p, x.dot(B.matrix() * x) + b.dot(x) + q};
  }

  Eigen::Matrix<Scalar, 2, Eigen::Dynamic> jacobian(const Vector<Scalar>& x) const {
    Eigen::Matrix<Scalar, 2, Eigen::Dynamic> J(2, x.size());
    J.row(0) = (Scalar(2) * (A.matrix() * x) + a).transpose();
    J.row(1) = (Scalar(2) * (B.matrix() * x) + b).transpose();
    return J;
  }

  /// Frobenius norm of all data.
  Scalar data_norm() const {
    using std::sqrt;
    return sqrt(A.matrix().squaredNorm() + B.matrix().squaredNorm() + a.squaredNorm() +
                b.squaredNorm() + p * p + q * q);
  }
};

template <typename Scalar>
struct ProbeReport {
  int samples = 0;
  int trials = 0;
  int realized = 0;
  Scalar fraction = 0;
  /// Largest relative residual over all trials, after the best restart.
  Scalar worst_residual = 0;
  std::uint64_t seed = 0;
};

namespace detail {

// Levenberg-Marquardt on the two residuals (f(x) - u, g(x) - v). Returns the
// final residual norm.
template <typename Scalar>
Scalar realize_point(const QuadraticPair<Scalar>& pair, const Eigen::Matrix<Scalar, 2, 1>& target,
                     Vector<Scalar> x, Scalar tol, int max_iter = 200) {
  Eigen::Matrix<Scalar, 2, 1> r = pair(x) - target;
  Scalar rn = r.norm();
  Scalar damping = -1;
  for (int k = 0; k < max_iter && rn > tol; ++k) {
    const auto J = pair.jacobian(x);
    const Eigen::Matrix<Scalar, 2, 2> JJt = J * J.transpose();
    if (damping < Scalar(0)) damping = Scalar(1e-3) * std::max(Scalar(1e-12), JJt.trace());
    bool improved = false;
    for (int attempt = 0; attempt < 30; ++attempt) {
      const Eigen::Matrix<Scalar, 2, 2> M = JJt + damping * Eigen::Matrix<Scalar, 2, 2>::Identity();
      const Vector<Scalar> step = -J.transpose() * M.ldlt().solve(r);
      const Vector<Scalar> trial = x + step;
      const Eigen::Matrix<Scalar, 2, 1> rt = pair(trial) - target;
      if (rt.norm() < rn) {
        x = trial;
        r = rt;
        rn = rt.norm();
        damping = std::max(damping / Scalar(3), Scalar(1e-300));
        improved = true;
        break;
      }
      damping *= Scalar(4);
    }
    if (!improved) break;
  }
  return rn;
}

}  // namespace detail

/// Samples `samples` points from a Gaussian cloud of scale 3 (1 + |data|),
/// then for `trials` random pairs of image points tries to realize their
/// midpoint from 20 restarts. Trials are seeded independently by index.
template <typename Scalar>
ProbeReport<Scalar> joint_range_probe(const QuadraticPair<Scalar>& pair, int samples, int trials,
                                      std::uint64_t seed) {
  using std::max;
  pair.validate();
  if (samples < 1000) throw InvalidInput("joint_range_probe: samples must be >= 1000");
  if (trials < 10) throw InvalidInput("joint_range_probe: trials must be >= 10");
  const Eigen::Index n = pair.dim();
  const Scalar cloud = Scalar(3) * (Scalar(1) + pair.data_norm());

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix<Scalar> X(n, samples);
  for (int s = 0; s < samples; ++s)
    for (Eigen::Index i = 0; i < n; ++i) X(i, s) = cloud * Scalar(nd(rng));

  ProbeReport<Scalar> rep;
  rep.samples = samples;
  rep.trials = trials;
  rep.seed = seed;
  constexpr int kRestarts = 20;
  for (int t = 0; t < trials; ++t) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t)};
    std::mt19937_64 trng(seq);
    std::uniform_int_distribution<int> pick(0, samples - 1);
    const int i = pick(trng);
    int j = pick(trng);
    while (j == i) j = pick(trng);
    const Vector<Scalar> xi = X.col(i), xj = X.col(j);
    const Eigen::Matrix<Scalar, 2, 1> target = (pair(xi) + pair(xj)) / Scalar(2);
    const Scalar scale = Scalar(1) + target.cwiseAbs().maxCoeff();
    const Scalar tol = Scalar(1e-6) * scale;

    const Scalar root_half = std::sqrt(Scalar(0.5));
    Vector<Scalar> starts[] = {xi, xj, (xi + xj) / Scalar(2), root_half * (xi + xj),
                               root_half * (xi - xj)};
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (int r = 0; r < kRestarts && best > tol; ++r) {
      Vector<Scalar> x0(n);
      if (r < 5) {
        x0 = starts[r];
      } else {
        std::normal_distribution<double> local(0.0, 1.0);
        for (Eigen::Index k = 0; k < n; ++k) x0(k) = cloud * Scalar(local(trng));
      }
      best = std::min(best, detail::realize_point(pair, target, x0, tol));
    }
    if (best <= tol) ++rep.realized;
    rep.worst_residual = max(rep.worst_residual, best / scale);
  }
  rep.fraction = Scalar(rep.realized) / Scalar(trials);
  return rep;
}

}  // namespace hcx
