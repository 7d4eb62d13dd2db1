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


// Acceptance runner: one PASS/FAIL line per criterion. Usage:
//   hcx_acceptance <path-to-hcx-binary>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "hcx/cli.hpp"
#include "hcx/hcx.hpp"
#include "test_util.hpp"

namespace {

using namespace hcx;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// 1. Closed-form p-RS instance.
Outcome closed_form_prs() {
  double worst = 0, slowest = 0;
  bool hard = true;
  for (int n = 2; n <= 5; ++n) {
    const PrsProblem<double> prob{SymMatrix<double>(Matrix<double>(-Matrix<double>::Identity(n, n))),
                                  Vector<double>::Zero(n), 4.0, 1.0};
    const auto start = Clock::now();
    const PrsSolution<double> sol = solve_prs(prob);
    slowest = std::max(slowest, ms_since(start));
    worst = std::max({worst, std::abs(sol.value + 0.25), std::abs(sol.lambda_star - 1.0),
                      std::abs(sol.z_star - 0.5)});
    hard = hard && sol.prs_case == PrsCase::Hard;
  }
  return {worst <= 1e-8 && hard && slowest < 10.0,
          fmt("max error %.2e, slowest solve %.3f ms", worst, slowest) + (hard ? "" : ", case not hard")};
}

// Shared instances for 2 and 3.
std::vector<PrsProblem<double>> prs_instances() {
  std::mt19937_64 rng(20260101);
  std::vector<PrsProblem<double>> out;
  for (int i = 0; i < 100; ++i) out.push_back(testing::random_prs(rng, 5));
  return out;
}

// 2. Oracle equivalence.
Outcome prs_oracle_equivalence(const std::vector<PrsProblem<double>>& instances) {
  const auto start = Clock::now();
  double worst = 0;
  int failures = 0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const double solved = solve_prs(instances[i]).value;
    const double ref = oracle_prs(instances[i], 64, i).value;
    const double err = std::abs(solved - ref) / (1 + std::abs(ref));
    worst = std::max(worst, err);
    if (err > 1e-5) ++failures;
  }
  const double secs = ms_since(start) / 1000;
  return {failures == 0 && secs < 30.0,
          fmt("%.0f failures, worst scaled gap %.2e, %.2f s", failures, worst, secs)};
}

// 3. Certificate sandwich.
Outcome prs_sandwich(const std::vector<PrsProblem<double>>& instances) {
  int failures = 0;
  for (const auto& prob : instances) {
    const PrsSolution<double> sol = solve_prs(prob);
    const double eps = 1e-3 * (1 + std::abs(sol.value));
    if (!prs_certificate(prob, sol.lambda_star, sol.value).verdict) ++failures;
    if (prs_certificate(prob, sol.lambda_star, sol.value + eps).verdict) ++failures;
  }
  return {failures == 0, fmt("%.0f wrong verdicts over %.0f instances", failures, instances.size())};
}

// 4. Hard-case coverage through the gen command.
Outcome hard_case_coverage() {
  int not_hard = 0;
  double worst_norm = 0, worst_stat = 0;
  for (int seed = 0; seed < 50; ++seed) {
    const int n = 2 + seed % 7;
    std::ostringstream out, err;
    const int code = cli::run({"hcx", "--seed", std::to_string(seed), "gen", "--hard", "--n",
                               std::to_string(n)},
                              out, err);
    if (code != 0) return {false, "gen failed: " + err.str()};
    const PrsProblem<double> prob =
        io::parse_problem(nlohmann::json::parse(out.str())).prs();
    const PrsSolution<double> sol = solve_prs(prob);
    if (sol.prs_case != PrsCase::Hard) ++not_hard;
    worst_norm = std::max(worst_norm, std::abs(sol.x.squaredNorm() - sol.z_star) / (1 + sol.z_star));
    const Vector<double> grad = 2 * (prob.A.matrix() * sol.x) + prob.b +
                                prob.rho * prob.p * std::pow(sol.x.norm(), prob.p - 2) * sol.x;
    worst_stat = std::max(worst_stat, grad.norm() / (1 + prob.b.norm()));
  }
  return {not_hard == 0 && worst_norm <= 1e-7 && worst_stat <= 1e-7,
          fmt("%.0f not hard, max | |x|^2 - z* | %.2e, max stationarity %.2e", not_hard,
              worst_norm, worst_stat)};
}

// 5. BE with b = 0; the reference eigenvalue is computed in long double.
Outcome be_zero_b() {
  std::mt19937_64 rng(55);
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    const int m = testing::uniform_int(rng, 1, 5), n = testing::uniform_int(rng, 1, 5);
    const Matrix<double> A = testing::gaussian_matrix(rng, m, n);
    const double ratio = solve_be(BeProblem<double>{A, Vector<double>::Zero(m)}).ratio;
    double expected = 0;
    if (m >= n) {  // otherwise A^T A is singular by construction
      using LD = long double;
      const Matrix<LD> Al = A.cast<LD>();
      const Eigen::SelfAdjointEigenSolver<Matrix<LD>> es(Al.transpose() * Al);
      expected = double(std::sqrt(std::max(LD(0), es.eigenvalues()(0))) /
                        std::sqrt(es.eigenvalues()(n - 1)));
    }
    const double err = expected > 0 ? std::abs(ratio - expected) / expected : std::abs(ratio);
    worst = std::max(worst, err);
  }
  return {worst <= 1e-9, fmt("worst relative error %.2e", worst)};
}

// 6. Consistent systems.
Outcome be_consistent() {
  std::mt19937_64 rng(66);
  double worst_ratio = 0, worst_res = 0;
  for (int i = 0; i < 50; ++i) {
    const int m = testing::uniform_int(rng, 1, 5), n = testing::uniform_int(rng, 1, 5);
    Matrix<double> A = testing::gaussian_matrix(rng, m, n);
    if (i % 5 == 0 && n > 1) A.col(n - 1) = A.col(0);  // rank deficient
    const Vector<double> b = A * testing::gaussian_vector(rng, n);
    const BeSolution<double> sol = solve_be(BeProblem<double>{A, b});
    worst_ratio = std::max(worst_ratio, sol.ratio);
    worst_res = std::max(worst_res, (A * sol.x - b).norm());
  }
  return {worst_ratio == 0 && worst_res <= 1e-10,
          fmt("max ratio %.2e, max residual %.2e", worst_ratio, worst_res)};
}

// 7. BE oracle equivalence and the residual identity of the recovered x.
Outcome be_oracle_equivalence() {
  std::mt19937_64 rng(77);
  double worst_gap = 0, worst_identity = 0;
  for (int i = 0; i < 100; ++i) {
    const BeProblem<double> prob = testing::random_inconsistent_be(rng, 4);
    const BeSolution<double> sol = solve_be(prob);
    const double ref = oracle_be(prob, 60, i).value;
    worst_gap = std::max(worst_gap, std::abs(sol.ratio - ref));
    const double denom = spectral_norm(prob.A) * sol.x.norm() + prob.b.norm();
    const double identity = std::abs((prob.A * sol.x - prob.b).squaredNorm() - sol.t_star * denom * denom);
    worst_identity = std::max(worst_identity, identity / std::max(1.0, denom * denom));
  }
  return {worst_gap <= 1e-5 && worst_identity <= 1e-7,
          fmt("worst |ratio - oracle| %.2e, worst scaled residual identity %.2e", worst_gap,
              worst_identity)};
}

// 8. Weak duality.
Outcome weak_duality() {
  std::mt19937_64 rng(88);
  int prs_violations = 0, be_violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const PrsProblem<double> prob = testing::random_prs(rng, 5);
    const PrsDual<double> dual(prob);
    const double lambda = dual.lower_bound() + 3 * dual.eig().scale() * testing::uniform(rng, 1e-4, 1);
    const Vector<double> x = testing::uniform(rng, 0, 3) * testing::gaussian_vector(rng, prob.dim());
    const double d = dual(lambda).value, h = evaluate_objective(prob, x);
    if (d > h + 1e-9 * (1 + std::abs(d) + std::abs(h))) ++prs_violations;
  }
  for (int i = 0; i < 10000; ++i) {
    const BeProblem<double> prob = testing::random_inconsistent_be(rng, 4);
    const BeDual<double> dual(prob);
    const double u = testing::uniform(rng, 1e-4, 1);
    const double lambda = dual.right_end() * (dual.right_end_closed() ? u : u * (1 - 1e-9));
    const double bound = 1.0 / dual(lambda).value;
    const Vector<double> x = testing::uniform(rng, 0, 5) * testing::gaussian_vector(rng, prob.A.cols());
    const double r = evaluate_ratio(prob, x);
    if (bound > r * r + 1e-9) ++be_violations;
  }
  return {prs_violations == 0 && be_violations == 0,
          fmt("violations: prs %.0f / 10000, be %.0f / 10000", prs_violations, be_violations)};
}

// 9. Midpoint concavity (prs) and convexity (be).
Outcome midpoint_suite() {
  std::mt19937_64 rng(99);
  int prs_violations = 0, be_violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const PrsProblem<double> prob = testing::random_prs(rng, 5);
    const PrsDual<double> dual(prob);
    const auto draw = [&] {
      return dual.lower_bound() + 3 * dual.eig().scale() * testing::uniform(rng, 1e-4, 1);
    };
    const double l1 = draw(), l2 = draw();
    const double d1 = dual(l1).value, d2 = dual(l2).value, dm = dual((l1 + l2) / 2).value;
    if (dm < (d1 + d2) / 2 - 1e-9 * (1 + std::abs(d1) + std::abs(d2))) ++prs_violations;
  }
  for (int i = 0; i < 1000; ++i) {
    const BeProblem<double> prob = testing::random_inconsistent_be(rng, 4);
    const BeDual<double> dual(prob);
    const auto draw = [&] {
      const double u = testing::uniform(rng, 1e-4, 1);
      return dual.right_end() * (dual.right_end_closed() ? u : u * (1 - 1e-9));
    };
    const double l1 = draw(), l2 = draw();
    const double f1 = dual(l1).value, f2 = dual(l2).value, fm = dual((l1 + l2) / 2).value;
    if (fm > (f1 + f2) / 2 + 1e-9 * (1 + std::abs(f1) + std::abs(f2))) ++be_violations;
  }
  return {prs_violations == 0 && be_violations == 0,
          fmt("violations: prs %.0f / 1000, be %.0f / 1000", prs_violations, be_violations)};
}

// 10. Dines probe.
Outcome dines_probe() {
  std::mt19937_64 rng(1010);
  double worst = 1;
  for (int i = 0; i < 20; ++i) {
    const int n = testing::uniform_int(rng, 2, 4);
    const QuadraticPair<double> pair{SymMatrix<double>(testing::random_symmetric(rng, n)),
                                     SymMatrix<double>(testing::random_symmetric(rng, n)),
                                     Vector<double>::Zero(n), Vector<double>::Zero(n)};
    worst = std::min(worst, joint_range_probe(pair, 1000, 20, i).fraction);
  }
  const QuadraticPair<double> parabola{SymMatrix<double>(Matrix<double>::Ones(1, 1)),
                                       SymMatrix<double>(Matrix<double>::Zero(1, 1)),
                                       Vector<double>::Zero(1), Vector<double>::Ones(1)};
  const double parabola_fraction = joint_range_probe(parabola, 1000, 20, 0).fraction;
  return {worst >= 0.99 && parabola_fraction < 1.0,
          fmt("lowest homogeneous fraction %.3f, parabola fraction %.3f", worst, parabola_fraction)};
}

// 11. TRS KKT suite and circle-grid agreement.
Outcome trs_kkt() {
  std::mt19937_64 rng(1111);
  double worst_feas = 0, worst_stat = 0, worst_grid = 0;
  int second_order_failures = 0;
  for (int i = 0; i < 200; ++i) {
    const int n = testing::uniform_int(rng, 1, 6);
    const TrsRequest<double> req{SymMatrix<double>(testing::random_symmetric(rng, n)),
                                 testing::gaussian_vector(rng, n), testing::uniform(rng, 0.1, 4),
                                 TrsConstraint::Sphere, i % 2 ? TrsSense::Max : TrsSense::Min};
    const TrsResult<double> res = solve_trs(req);
    const KktReport<double> kkt = kkt_report(req, res);
    worst_feas = std::max(worst_feas, std::abs(res.x.squaredNorm() - req.radius_sq) / req.radius_sq);
    worst_stat = std::max(worst_stat, kkt.residual);
    if (!kkt.second_order_ok) ++second_order_failures;
  }
  for (int i = 0; i < 50; ++i) {
    const Matrix<double> Q = testing::random_symmetric(rng, 2);
    const Vector<double> c = testing::gaussian_vector(rng, 2);
    const double r2 = testing::uniform(rng, 0.1, 4);
    const double value = solve_trs(TrsRequest<double>{SymMatrix<double>(Q), c, r2}).objective;
    const double ref = testing::circle_grid_min(Q, c, std::sqrt(r2), 1.0);
    worst_grid = std::max(worst_grid, std::abs(value - ref) / (1 + std::abs(ref)));
  }
  return {worst_feas <= 1e-10 && worst_stat <= 1e-7 && second_order_failures == 0 && worst_grid <= 1e-6,
          fmt("feasibility %.2e, stationarity %.2e, grid gap %.2e", worst_feas, worst_stat,
              worst_grid) +
              (second_order_failures ? ", second-order failures" : "")};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 12. Byte-identical results from two independent processes.
Outcome determinism(const std::string& binary) {
  if (binary.empty()) return {false, "no hcx binary given"};
  const fs::path dir = fs::temp_directory_path() / "hcx_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  int compared = 0;
  for (const std::string kind : {"prs", "be"}) {
    for (const std::string seed : {"1", "2", "3"}) {
      const fs::path problem = dir / (kind + seed + ".json");
      std::string cmd = "\"" + binary + "\" --seed " + seed + " gen --kind " + kind + " --n 4 > \"" +
                        problem.string() + "\"";
      if (std::system(cmd.c_str()) != 0) return {false, "gen failed"};
      std::string outputs[2];
      for (int run = 0; run < 2; ++run) {
        const fs::path out = dir / (kind + seed + "_run" + std::to_string(run) + ".json");
        cmd = "\"" + binary + "\" --no-timing --out \"" + out.string() + "\" solve \"" +
              problem.string() + "\"";
        if (std::system(cmd.c_str()) != 0) return {false, "solve failed on " + problem.string()};
        outputs[run] = slurp(out);
      }
      if (outputs[0].empty() || outputs[0] != outputs[1])
        return {false, "outputs differ for " + problem.filename().string()};
      ++compared;
    }
  }
  return {true, fmt("%.0f problem files, two runs each, byte-identical", compared)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string binary = argc > 1 ? argv[1] : "";
  const std::vector<PrsProblem<double>> instances = prs_instances();
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"p-RS closed-form instance", closed_form_prs},
      {"p-RS oracle equivalence", [&] { return prs_oracle_equivalence(instances); }},
      {"p-RS certificate sandwich", [&] { return prs_sandwich(instances); }},
      {"hard-case coverage", hard_case_coverage},
      {"BE b=0 formula", be_zero_b},
      {"BE consistent-system short-circuit", be_consistent},
      {"BE oracle equivalence", be_oracle_equivalence},
      {"weak duality", weak_duality},
      {"midpoint concavity/convexity", midpoint_suite},
      {"Dines probe", dines_probe},
      {"TRS KKT suite", trs_kkt},
      {"determinism", [&] { return determinism(binary); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2zu %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
