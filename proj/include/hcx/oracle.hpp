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
// Brute-force reference solvers. These work directly on the primal
// objectives with multi-start local descent and share nothing with the dual
// route, so agreement between the two is meaningful evidence.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "hcx/be_problem.hpp"
#include "hcx/linalg.hpp"
#include "hcx/prs_problem.hpp"

namespace hcx {

template <typename Scalar>
struct OracleReport {
  Scalar value = 0;
  Vector<Scalar> x;
  int starts = 0;
  int best_start_index = 0;
  /// Objective gap to the best local minimum in a different basin; +inf when
  /// every start converged to the same point.
  Scalar spread = std::numeric_limits<Scalar>::infinity();
};

namespace detail {

template <typename Scalar>
using Objective = std::function<Scalar(const Vector<Scalar>&)>;
template <typename Scalar>
using Gradient = std::function<Vector<Scalar>(const Vector<Scalar>&)>;

/// Gradient descent with Barzilai-Borwein trial steps and Armijo backtracking.
template <typename Scalar>
Vector<Scalar> descend(const Objective<Scalar>& f, const Gradient<Scalar>& grad, Vector<Scalar> x,
                       int max_steps, Scalar gtol) {
  using std::isfinite;
  Scalar fx = f(x);
  Vector<Scalar> g = grad(x);
  Scalar step = Scalar(1) / std::max(Scalar(1), g.norm());
  Vector<Scalar> x_prev = x, g_prev = g;
  int stalled = 0;
  for (int k = 0; k < max_steps && g.norm() > gtol && stalled < 3; ++k) {
    if (k > 0) {
      const Vector<Scalar> s = x - x_prev, y = g - g_prev;
      const Scalar sy = s.dot(y);
      step = sy > Scalar(0) ? s.squaredNorm() / sy : step * Scalar(2);
    }
    const Scalar g2 = g.squaredNorm();
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Vector<Scalar> trial = x - step * g;
      const Scalar ft = f(trial);
      if (isfinite(ft) && ft <= fx - Scalar(1e-4) * step * g2) {
        // Movement below rounding level of x counts as a stall.
        const bool tiny = (trial - x).norm() <= Scalar(1e-14) * (Scalar(1) + x.norm());
        stalled = tiny ? stalled + 1 : 0;
        x_prev = x;
        g_prev = g;
        x = trial;
        fx = ft;
        accepted = true;
        break;
      }
      step /= Scalar(2);
    }
    if (!accepted) break;
    g = grad(x);
  }
  return x;
}

template <typename Scalar>
struct LocalMin {
  Scalar value;
  Vector<Scalar> x;
  int index;
};

template <typename Scalar>
OracleReport<Scalar> reduce_minima(std::vector<LocalMin<Scalar>> mins) {
  std::stable_sort(mins.begin(), mins.end(),
                   [](const auto& l, const auto& r) { return l.value < r.value; });
  OracleReport<Scalar> rep;
  rep.starts = static_cast<int>(mins.size());
  rep.value = mins.front().value;
  rep.x = mins.front().x;
  rep.best_start_index = mins.front().index;
  const Scalar sep = Scalar(1e-4) * (Scalar(1) + rep.x.norm());
  for (std::size_t i = 1; i < mins.size(); ++i) {
    if ((mins[i].x - rep.x).norm() > sep) {
      rep.spread = mins[i].value - rep.value;
      break;
    }
  }
  return rep;
}

template <typename Scalar>
Vector<Scalar> gaussian_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Vector<Scalar> v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Scalar(nd(rng));
  return v;
}

template <typename Scalar>
Vector<Scalar> unit_vector(std::mt19937_64& rng, Eigen::Index n) {
  Vector<Scalar> v;
  do v = gaussian_vector<Scalar>(rng, n);
  while (v.norm() == Scalar(0));
  return v / v.norm();
}

/// Radius beyond which h increases radially: the largest root of
/// rho p r^{p-1} = 2 |A| r + |b|.
template <typename Scalar>
Scalar prs_stationary_radius(Scalar norm_a, Scalar norm_b, Scalar p, Scalar rho) {
  using std::pow;
  const auto excess = [&](Scalar r) {
    return rho * p * pow(r, p - Scalar(1)) - Scalar(2) * norm_a * r - norm_b;
  };
  Scalar hi = 1;
  while (excess(hi) <= Scalar(0)) hi *= Scalar(2);
  Scalar lo = 0;
  for (int i = 0; i < 200; ++i) {
    const Scalar mid = lo + (hi - lo) / Scalar(2);
    if (excess(mid) <= Scalar(0)) lo = mid; else hi = mid;
  }
  return hi;
}

}  // namespace detail

/// Multi-start minimization of h(x) = x^T A x + b^T x + rho |x|^p.
template <typename Scalar>
OracleReport<Scalar> oracle_prs(const PrsProblem<Scalar>& prob, int starts = 64,
                                std::uint64_t seed = 0) {
  using std::max;
  using std::pow;
  prob.validate();
  const Matrix<Scalar>& A = prob.A.matrix();
  const Eigen::Index n = prob.dim();
  const Scalar norm_a = spectral_norm(A);
  const Scalar norm_b = prob.b.norm();
  const Scalar p = prob.p, rho = prob.rho;

  // Every stationary point satisfies |x| <= stationary radius, so the
  // heuristic radius is enlarged when it would fall short of it.
  const Scalar heuristic = Scalar(3) * pow(Scalar(2) * norm_a / (rho * p), Scalar(1) / (p - Scalar(2))) + norm_b;
  const Scalar radius =
      max(heuristic, Scalar(1.1) * detail::prs_stationary_radius(norm_a, norm_b, p, rho));

  const detail::Objective<Scalar> f = [&](const Vector<Scalar>& x) {
    return evaluate_objective(prob, x);
  };
  const detail::Gradient<Scalar> grad = [&](const Vector<Scalar>& x) {
    const Scalar r = x.norm();
    Vector<Scalar> g = Scalar(2) * (A * x) + prob.b;
    if (r > Scalar(0)) g += rho * p * pow(r, p - Scalar(2)) * x;
    return g;
  };
  const Scalar gtol = Scalar(1e-10) * (Scalar(1) + norm_a + norm_b);

  std::mt19937_64 rng(seed);
  std::vector<Vector<Scalar>> initial;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int s = 0; s < starts; ++s) {
    const Scalar u = pow(Scalar(unif(rng)), Scalar(1) / Scalar(n));
    initial.push_back(radius * u * detail::unit_vector<Scalar>(rng, n));
  }
  // Radial grid scans along +-b and a few random directions.
  std::vector<Vector<Scalar>> directions;
  if (norm_b > Scalar(0)) {
    directions.push_back(prob.b / norm_b);
    directions.push_back(-prob.b / norm_b);
  }
  for (int k = 0; k < 8; ++k) directions.push_back(detail::unit_vector<Scalar>(rng, n));
  for (const auto& d : directions) {
    Scalar best_r = 0, best_v = f(Vector<Scalar>::Zero(n));
    for (int i = 1; i <= 400; ++i) {
      const Scalar r = radius * Scalar(i) / Scalar(400);
      const Scalar v = f(r * d);
      if (v < best_v) best_v = v, best_r = r;
    }
    initial.push_back(best_r * d);
  }

  std::vector<detail::LocalMin<Scalar>> mins;
  for (std::size_t i = 0; i < initial.size(); ++i) {
    Vector<Scalar> x = detail::descend(f, grad, initial[i], 10000, gtol);
    // Damped Newton polish where the Hessian is positive definite.
    for (int k = 0; k < 30; ++k) {
      const Scalar r = x.norm();
      if (r == Scalar(0)) break;
      const Vector<Scalar> g = grad(x);
      if (g.norm() <= gtol) break;
      Matrix<Scalar> H = Scalar(2) * A + rho * p * pow(r, p - Scalar(2)) * Matrix<Scalar>::Identity(n, n) +
                         rho * p * (p - Scalar(2)) * pow(r, p - Scalar(4)) * x * x.transpose();
      Eigen::LLT<Matrix<Scalar>> llt(H);
      if (llt.info() != Eigen::Success) break;
      const Vector<Scalar> dx = llt.solve(g);
      Scalar t = 1;
      const Scalar fx = f(x);
      while (t > Scalar(1e-8) && !(f(x - t * dx) < fx)) t /= Scalar(2);
      if (t <= Scalar(1e-8)) break;
      x -= t * dx;
    }
    mins.push_back({f(x), x, static_cast<int>(i)});
  }
  return detail::reduce_minima(std::move(mins));
}

/// Multi-start minimization of |Ax - b|^2 / (|A| |x| + |b|)^2; reports the
/// unsquared ratio.
template <typename Scalar>
OracleReport<Scalar> oracle_be(const BeProblem<Scalar>& prob, int starts = 60,
                               std::uint64_t seed = 0) {
  using std::sqrt;
  prob.validate();
  const Matrix<Scalar>& A = prob.A;
  const Eigen::Index n = A.cols();
  const Scalar norm_a = spectral_norm(A);
  const Scalar norm_b = prob.b.norm();

  const detail::Objective<Scalar> f = [&](const Vector<Scalar>& x) {
    const Scalar d = norm_a * x.norm() + norm_b;
    if (d == Scalar(0)) return Scalar(1);
    return (A * x - prob.b).squaredNorm() / (d * d);
  };
  const detail::Gradient<Scalar> grad = [&](const Vector<Scalar>& x) {
    const Vector<Scalar> r = A * x - prob.b;
    const Scalar xn = x.norm();
    const Scalar d = norm_a * xn + norm_b;
    Vector<Scalar> g = Scalar(2) * (A.transpose() * r) / (d * d);
    if (xn > Scalar(0)) g -= Scalar(2) * r.squaredNorm() * norm_a / (d * d * d * xn) * x;
    return g;
  };

  std::mt19937_64 rng(seed);
  std::vector<Vector<Scalar>> initial;
  const Scalar base = norm_b > Scalar(0) ? norm_b / norm_a : Scalar(1);
  const Scalar radii[] = {Scalar(0.1) * base, base, Scalar(10) * base};
  for (int s = 0; s < starts; ++s) initial.push_back(radii[s % 3] * detail::unit_vector<Scalar>(rng, n));
  // Least-squares point: exact answer for consistent systems.
  const Vector<Scalar> x_ls = A.completeOrthogonalDecomposition().solve(prob.b);
  if (x_ls.norm() > Scalar(0)) initial.push_back(x_ls);

  std::vector<detail::LocalMin<Scalar>> mins;
  for (std::size_t i = 0; i < initial.size(); ++i) {
    Vector<Scalar> x = detail::descend(f, grad, initial[i], 10000, Scalar(1e-14));
    mins.push_back({f(x), x, static_cast<int>(i)});
  }
  OracleReport<Scalar> rep = detail::reduce_minima(std::move(mins));
  rep.value = sqrt(rep.value);
  rep.spread = sqrt(rep.spread + rep.value * rep.value) - rep.value;
  return rep;
}

}  // namespace hcx
