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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hcx/io.hpp"
#include "hcx/options.hpp"

namespace hcx::cli {

/// Exit-code contract of `hcx solve`; other commands use kOk / kError.
enum ExitCode : int { kOk = 0, kError = 1, kDegenerate = 2, kNoConvergence = 3 };

/// Verification tolerance: 1e-8 unless HCX_DEFAULT_TOL is set.
double default_tolerance();

struct GenOptions {
  std::string kind = "prs";
  int n = 4;
  int m = 0;  // 0 means n + 1 for "be"
  std::uint64_t seed = 0;
  bool hard = false;
  double p = 3.0;
  double rho = 1.0;
};

/// Deterministic random instance. Hard instances have b orthogonal to the
/// (simple) lambda_min eigenvector of A, scaled so the multiplier sits at
/// -lambda_min(A).
io::ProblemFile generate(const GenOptions& opts);

/// Solves a parsed problem and builds its ResultFile. Sets *exit_code per the
/// solve exit-code contract. Validation errors propagate as InvalidInput.
io::Json solve_to_json(const io::ProblemFile& problem, const SolverOptions& opts, bool timing,
                       int* exit_code);

/// CSV rows "lambda,value,derivative" sampled on the admissible dual domain.
std::string dual_curve_csv(const io::ProblemFile& problem, int grid, const SolverOptions& opts);

/// Entry point shared by the executable and the tests. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hcx::cli
