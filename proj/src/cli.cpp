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

#include "hcx/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

namespace hcx::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

Json error_json(const std::string& message) {
  Json j;
  j["status"] = "error";
  j["message"] = message;
  return j;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json prs_result(const io::ProblemFile& pf, const SolverOptions& opts, int* code) {
  const PrsProblem<double> prob = pf.prs();
  Json j;
  j["kind"] = "prs";
  try {
    const PrsSolution<double> sol = solve_prs(prob, opts);
    const bool certified = sol.certificate.verdict;
    j["status"] = certified ? "optimal" : "error";
    if (!certified) j["message"] = "certificate verification failed at the returned solution";
    j["value"] = sol.value;
    j["x"] = io::to_json(sol.x);
    j["dual"] = Json{{"lambda", sol.lambda_star}, {"t", sol.value}};
    j["certificate"] = io::to_json(sol.certificate);
    j["case"] = to_string(sol.prs_case);
    j["z_star"] = sol.z_star;
    j["dual_value"] = sol.dual_value;
    j["dual_gap_bound"] = sol.dual_gap_bound;
    j["iterations"] = sol.iterations;
    *code = certified ? kOk : kError;
  } catch (const NoConvergence& e) {
    j["status"] = "no_convergence";
    j["message"] = e.what();
    j["best_lambda"] = e.best_lambda();
    j["iterations"] = e.iterations();
    *code = kNoConvergence;
  } catch (const DegenerateInstance& e) {
    j["status"] = "degenerate";
    j["message"] = e.what();
    *code = kDegenerate;
  }
  return j;
}

Json be_result(const io::ProblemFile& pf, const SolverOptions& opts, int* code) {
  const BeProblem<double> prob = pf.be();
  Json j;
  j["kind"] = "be";
  try {
    const BeSolution<double> sol = solve_be(prob, opts);
    const bool certified = sol.certificate.verdict;
    j["status"] = certified ? "optimal" : "error";
    if (!certified) j["message"] = "certificate verification failed at the returned solution";
    j["value"] = sol.ratio;
    j["x"] = io::to_json(sol.x);
    j["dual"] = Json{{"lambda", sol.lambda_star}, {"w", sol.w_star}};
    j["certificate"] = io::to_json(sol.certificate);
    j["path"] = to_string(sol.path);
    j["t_star"] = sol.t_star;
    j["z_star"] = sol.z_star;
    j["alpha"] = sol.alpha ? Json(*sol.alpha) : Json(nullptr);
    j["iterations"] = sol.iterations;
    *code = certified ? kOk : kError;
  } catch (const NoConvergence& e) {
    j["status"] = "no_convergence";
    j["message"] = e.what();
    j["best_lambda"] = e.best_lambda();
    j["iterations"] = e.iterations();
    *code = kNoConvergence;
  } catch (const DegenerateInstance& e) {
    j["status"] = "degenerate";
    j["message"] = e.what();
    *code = kDegenerate;
  } catch (const InternalInconsistency& e) {
    j["status"] = "error";
    j["message"] = e.what();
    *code = kError;
  }
  return j;
}

/// Writes to --out when given, otherwise to `out`.
void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw InvalidInput("cannot write output file " + out_path);
  f << text;
}

int solve_batch(const fs::path& dir, const std::string& out_dir, const SolverOptions& opts,
                bool timing, std::ostream& err) {
  if (!fs::is_directory(dir)) throw InvalidInput("batch path is not a directory: " + dir.string());
  const fs::path target = out_dir.empty() ? dir : fs::path(out_dir);
  fs::create_directories(target);
  std::vector<fs::path> inputs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && entry.path().extension() == ".json" &&
        name.find(".result.") == std::string::npos)
      inputs.push_back(entry.path());
  }
  std::sort(inputs.begin(), inputs.end());
  int worst = kOk;
  for (const auto& input : inputs) {
    int code = kOk;
    Json result;
    try {
      result = solve_to_json(io::load_problem(input), opts, timing, &code);
    } catch (const std::exception& e) {
      result = error_json(e.what());
      code = kError;
    }
    std::ofstream f(target / (input.stem().string() + ".result.json"), std::ios::binary);
    io::write_json(f, result);
    if (code != kOk) err << input.filename().string() << ": exit " << code << '\n';
    worst = std::max(worst, code);
  }
  return worst;
}

}  // namespace

double default_tolerance() {
  const char* env = std::getenv("HCX_DEFAULT_TOL");
  if (!env || !*env) return 1e-8;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !std::isfinite(v) || !(v > 0))
    throw InvalidInput(std::string("HCX_DEFAULT_TOL must be a positive number, got ") + env);
  return v;
}

io::ProblemFile generate(const GenOptions& o) {
  if (o.n < 1) throw InvalidInput("gen: n must be >= 1");
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto gaussian = [&](Eigen::Index rows, Eigen::Index cols) {
    Matrix<double> m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = nd(rng);
    return m;
  };

  io::ProblemFile pf;
  pf.kind = o.kind;
  if (o.kind == "be") {
    if (o.hard) throw InvalidInput("gen: --hard applies to prs instances only");
    const int m = o.m > 0 ? o.m : o.n + 1;
    pf.A = gaussian(m, o.n);
    pf.b = gaussian(m, 1).col(0);
    pf.be();
    return pf;
  }
  if (o.kind != "prs") throw InvalidInput("gen: kind must be prs or be");
  pf.p = o.p;
  pf.rho = o.rho;
  const Eigen::Index n = o.n;
  if (!o.hard) {
    const Matrix<double> G = gaussian(n, n);
    pf.A = (G + G.transpose()) / 2.0;
    pf.b = gaussian(n, 1).col(0);
    pf.prs();
    return pf;
  }

  // Simple negative lambda_min with a spectral gap, b in the span of the
  // remaining eigenvectors with |(A - lambda_min I)^+ b / 2|^2 = z(-lambda_min) / 4.
  const Matrix<double> Q = Eigen::HouseholderQR<Matrix<double>>(gaussian(n, n)).householderQ();
  Vector<double> eigenvalues(n);
  eigenvalues(0) = -(0.5 + unif(rng));
  for (Eigen::Index i = 1; i < n; ++i) eigenvalues(i) = eigenvalues(0) + 0.5 + 3.0 * unif(rng);
  Vector<double> coeffs = gaussian(n, 1).col(0);
  coeffs(0) = 0.0;
  double shifted_norm = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) {
    const double y = coeffs(i) / (2.0 * (eigenvalues(i) - eigenvalues(0)));
    shifted_norm += y * y;
  }
  const double z_low = phi_argmin(-eigenvalues(0), o.p, o.rho);
  const double alpha = shifted_norm > 0 ? std::sqrt(0.25 * z_low / shifted_norm) : 0.0;
  const Matrix<double> A = Q * eigenvalues.asDiagonal() * Q.transpose();
  pf.A = (A + A.transpose()) / 2.0;
  pf.b = alpha * (Q * coeffs);

  const PrsSolution<double> check = solve_prs(pf.prs());
  if (check.prs_case != PrsCase::Hard)
    throw InternalInconsistency("gen: constructed hard instance did not solve as hard case");
  return pf;
}

io::Json solve_to_json(const io::ProblemFile& problem, const SolverOptions& opts, bool timing,
                       int* exit_code) {
  const auto start = std::chrono::steady_clock::now();
  Json j;
  if (problem.kind == "prs") {
    j = prs_result(problem, opts, exit_code);
  } else if (problem.kind == "be") {
    j = be_result(problem, opts, exit_code);
  } else {
    throw InvalidInput("solve: kind must be prs or be");
  }
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  j["wall_time_ms"] = timing ? Json(ms) : Json(nullptr);
  return j;
}

std::string dual_curve_csv(const io::ProblemFile& problem, int grid, const SolverOptions& opts) {
  if (grid < 2) throw InvalidInput("dualplot: grid must be >= 2");
  std::ostringstream csv;
  csv << "lambda,value,derivative\n";
  const auto row = [&](double lambda, double value, double derivative) {
    csv << format_number(lambda) << ',' << format_number(value) << ',' << format_number(derivative)
        << '\n';
  };

  if (problem.kind == "prs") {
    const PrsProblem<double> prob = problem.prs();
    const PrsDual<double> dual(prob);
    const double lambda_star = solve_prs(prob, opts).lambda_star;
    const double low = dual.lower_bound();
    const double width = 2.0 * std::max(lambda_star - low, 0.5);
    for (int k = 0; k < grid; ++k) {
      const double lambda = dual.lower_bound_admissible()
                                ? low + width * k / (grid - 1)
                                : low + width * (k + 1) / grid;
      const DualPoint<double> dp = dual(lambda);
      row(lambda, dp.value, dp.derivative);
    }
  } else if (problem.kind == "be") {
    const BeDual<double> dual(problem.be());
    if (dual.empty())
      throw DegenerateInstance("dualplot: the backward-error dual has an empty admissible interval");
    const double right = dual.right_end();
    for (int k = 0; k < grid; ++k) {
      const double lambda = dual.right_end_closed() ? right * (k + 1) / grid
                                                    : right * (k + 1) / (grid + 1);
      const BeDualPoint<double> dp = dual(lambda);
      row(lambda, dp.value, dp.derivative);
    }
  } else {
    throw InvalidInput("dualplot: kind must be prs or be");
  }
  return csv.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Global solvers for the p-regularized subproblem and the normwise backward error",
               "hcx"};
  app.fallthrough();
  app.require_subcommand(1);
  std::string out_path;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  bool no_timing = false;
  app.add_option("--out", out_path, "Write output to this path instead of stdout");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--tol", tol, "Certificate verification tolerance (default 1e-8 or $HCX_DEFAULT_TOL)");
  app.add_flag("--no-timing", no_timing, "Emit wall_time_ms as null for reproducible output");

  std::string input;
  std::string batch_dir;
  int max_iter = SolverOptions{}.max_iter;
  auto* solve = app.add_subcommand("solve", "Solve a prs or be problem file");
  solve->add_option("input", input, "Problem file");
  solve->add_option("--batch", batch_dir, "Solve every *.json file in a directory");
  solve->add_option("--max-iter", max_iter, "Dual iteration limit");

  int starts = 64;
  auto* oracle = app.add_subcommand("oracle", "Run the multi-start reference solver");
  oracle->add_option("input", input, "Problem file")->required();
  oracle->add_option("--starts", starts, "Number of random starts");

  double lambda = 0;
  std::optional<double> t_value, w_value;
  auto* verify = app.add_subcommand("verify", "Check a PSD certificate at given dual parameters");
  verify->add_option("input", input, "Problem file")->required();
  verify->add_option("--lambda", lambda, "Multiplier")->required();
  auto* t_opt = verify->add_option("--t", t_value, "Lower bound to certify (prs)");
  auto* w_opt = verify->add_option("--w", w_value, "Corner entry w (be)");
  t_opt->excludes(w_opt);

  GenOptions gen_opts;
  auto* gen = app.add_subcommand("gen", "Generate a random problem file");
  gen->add_option("--kind", gen_opts.kind, "prs or be")->check(CLI::IsMember({"prs", "be"}));
  gen->add_option("--n", gen_opts.n, "Number of unknowns");
  gen->add_option("--m", gen_opts.m, "Rows of A for be (default n + 1)");
  gen->add_option("--p", gen_opts.p, "Regularization exponent for prs");
  gen->add_option("--rho", gen_opts.rho, "Regularization weight for prs");
  gen->add_flag("--hard", gen_opts.hard, "Force the hard case (prs)");

  int grid = 100;
  auto* dualplot = app.add_subcommand("dualplot", "Sample the univariate dual as CSV");
  dualplot->add_option("input", input, "Problem file")->required();
  dualplot->add_option("--grid", grid, "Number of samples");

  int samples = 2000, trials = 50;
  auto* probe = app.add_subcommand("probe", "Sample the joint range of a quadratic pair");
  probe->add_option("input", input, "Pair file")->required();
  probe->add_option("--samples", samples, "Sampled points");
  probe->add_option("--trials", trials, "Midpoints to realize");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  try {
    SolverOptions opts;
    opts.max_iter = max_iter;
    opts.certificate_tol = tol ? *tol : default_tolerance();
    if (!(opts.certificate_tol > 0)) throw InvalidInput("--tol must be positive");

    if (*solve) {
      if (!batch_dir.empty()) return solve_batch(batch_dir, out_path, opts, !no_timing, err);
      if (input.empty()) throw InvalidInput("solve: an input file or --batch is required");
      int code = kOk;
      const Json result = solve_to_json(io::load_problem(input), opts, !no_timing, &code);
      emit(io::dump_json(result), out_path, out);
      return code;
    }
    if (*oracle) {
      const io::ProblemFile pf = io::load_problem(input);
      Json j;
      j["kind"] = pf.kind;
      if (pf.kind == "prs") {
        j.update(io::to_json(oracle_prs(pf.prs(), starts, seed)));
      } else if (pf.kind == "be") {
        j.update(io::to_json(oracle_be(pf.be(), starts, seed)));
      } else {
        throw InvalidInput("oracle: kind must be prs or be");
      }
      j["seed"] = seed;
      emit(io::dump_json(j), out_path, out);
      return kOk;
    }
    if (*verify) {
      const io::ProblemFile pf = io::load_problem(input);
      CertificateReport<double> rep;
      if (pf.kind == "prs") {
        if (!t_value) throw InvalidInput("verify: prs certificates need --t");
        rep = prs_certificate(pf.prs(), lambda, *t_value, opts.certificate_tol);
      } else if (pf.kind == "be") {
        if (!w_value) throw InvalidInput("verify: be certificates need --w");
        rep = be_certificate(pf.be(), lambda, *w_value, opts.certificate_tol);
      } else {
        throw InvalidInput("verify: kind must be prs or be");
      }
      emit(io::dump_json(io::to_json(rep, true)), out_path, out);
      return kOk;
    }
    if (*gen) {
      gen_opts.seed = seed;
      emit(io::dump_json(io::problem_to_json(generate(gen_opts))), out_path, out);
      return kOk;
    }
    if (*dualplot) {
      emit(dual_curve_csv(io::load_problem(input), grid, opts), out_path, out);
      return kOk;
    }
    if (*probe) {
      const io::ProblemFile pf = io::load_problem(input);
      if (pf.kind != "pair") throw InvalidInput("probe: kind must be pair");
      emit(io::dump_json(io::to_json(joint_range_probe(pf.pair(), samples, trials, seed))),
           out_path, out);
      return kOk;
    }
  } catch (const DegenerateInstance& e) {
    io::write_json(err, error_json(e.what()));
    return kDegenerate;
  } catch (const NoConvergence& e) {
    io::write_json(err, error_json(e.what()));
    return kNoConvergence;
  } catch (const std::exception& e) {
    io::write_json(err, error_json(e.what()));
    return kError;
  }
  return kError;
}

}  // namespace hcx::cli
