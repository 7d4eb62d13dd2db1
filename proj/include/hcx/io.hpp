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
// Problem and result file formats.
//
// A problem file is a JSON object:
//
//   {"kind": "prs", "A": [[...], ...], "b": [...], "p": 3, "rho": 1}
//   {"kind": "be",  "A": [[...], ...], "b": [...]}
//   {"kind": "pair", "A": ..., "B": ..., "a": [...], "b": [...], "p": 0, "q": 0}
//
// "A" may be replaced by "A_mm": a Matrix Market file path, resolved
// relative to the problem file. Floating-point output uses 17 significant
// digits so values round-trip bit for bit.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "hcx/backward_error.hpp"
#include "hcx/joint_range.hpp"
#include "hcx/oracle.hpp"
#include "hcx/prs.hpp"

namespace hcx::io {

using Json = nlohmann::ordered_json;

struct ProblemFile {
  std::string kind;  // "prs", "be" or "pair"
  Matrix<double> A;
  Vector<double> b;
  std::optional<double> p;
  double rho = 1.0;
  // "pair" only.
  Matrix<double> B;
  Vector<double> a;
  double q = 0.0;

  PrsProblem<double> prs() const;
  BeProblem<double> be() const;
  QuadraticPair<double> pair() const;
};

/// Parses Matrix Market "matrix array|coordinate real|integer general|symmetric".
Matrix<double> read_matrix_market(std::istream& in);
Matrix<double> read_matrix_market(const std::filesystem::path& path);

/// Parses and validates a problem; throws InvalidInput on any defect.
ProblemFile parse_problem(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ProblemFile load_problem(const std::filesystem::path& path);

Json problem_to_json(const ProblemFile& problem);

Json to_json(const Vector<double>& v);
Json to_json(const Matrix<double>& m);
Json to_json(const CertificateReport<double>& c, bool include_matrix = false);
Json to_json(const OracleReport<double>& r);
Json to_json(const ProbeReport<double>& r);

/// Serializes with 17 significant digits; non-finite numbers become null.
void write_json(std::ostream& out, const Json& j, int indent = 2);
std::string dump_json(const Json& j, int indent = 2);

}  // namespace hcx::io
