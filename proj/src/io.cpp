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

#include "hcx/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hcx::io {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

Vector<double> parse_vector(const nlohmann::json& j, const char* name) {
  if (!j.is_array()) throw InvalidInput(std::string(name) + " must be an array of numbers");
  Vector<double> v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InvalidInput(std::string(name) + " must contain only numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Matrix<double> parse_dense(const nlohmann::json& j, const char* name) {
  if (!j.is_array() || j.empty()) throw InvalidInput(std::string(name) + " must be a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array()) throw InvalidInput(std::string(name) + " must be an array of rows");
  const std::size_t cols = j[0].size();
  Matrix<double> m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw InvalidInput(std::string(name) + " rows must all have the same length");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw InvalidInput(std::string(name) + " must contain only numbers");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    }
  }
  return m;
}

Matrix<double> parse_matrix_field(const nlohmann::json& j, const char* name,
                                  const std::filesystem::path& base_dir) {
  const std::string mm = std::string(name) + "_mm";
  if (j.contains(name) && j.contains(mm))
    throw InvalidInput(std::string("give either ") + name + " or " + mm + ", not both");
  if (j.contains(mm)) {
    if (!j[mm].is_string()) throw InvalidInput(mm + " must be a path string");
    std::filesystem::path p = j[mm].get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    return read_matrix_market(p);
  }
  if (!j.contains(name)) throw InvalidInput(std::string("missing field ") + name);
  return parse_dense(j[name], name);
}

double number_field(const nlohmann::json& j, const char* name, double fallback) {
  if (!j.contains(name)) return fallback;
  if (!j[name].is_number()) throw InvalidInput(std::string(name) + " must be a number");
  return j[name].get<double>();
}

void write_number(std::ostream& out, double v) {
  if (!std::isfinite(v)) {
    out << "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

void write_value(std::ostream& out, const Json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) { out << "{}"; return; }
      out << '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out << ',';
        first = false;
        newline(depth + 1);
        out << Json(key).dump() << (indent < 0 ? ":" : ": ");
        write_value(out, value, indent, depth + 1);
      }
      newline(depth);
      out << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) { out << "[]"; return; }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(),
                                     [](const Json& e) { return e.is_structured(); });
      out << '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out << (flat || indent < 0 ? ", " : ",");
        if (!flat) newline(depth + 1);
        write_value(out, j[i], indent, depth + 1);
      }
      if (!flat) newline(depth);
      out << ']';
      return;
    }
    case Json::value_t::number_float:
      write_number(out, j.get<double>());
      return;
    default:
      out << j.dump();
  }
}

}  // namespace

PrsProblem<double> ProblemFile::prs() const {
  PrsProblem<double> prob{SymMatrix<double>(A), b, p.value_or(3.0), rho};
  prob.validate();
  return prob;
}

BeProblem<double> ProblemFile::be() const {
  BeProblem<double> prob{A, b};
  prob.validate();
  return prob;
}

QuadraticPair<double> ProblemFile::pair() const {
  QuadraticPair<double> qp{SymMatrix<double>(A), SymMatrix<double>(B), a, b, p.value_or(0.0), q};
  qp.validate();
  return qp;
}

Matrix<double> read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("matrix market: empty input");
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    throw InvalidInput("matrix market: missing %%MatrixMarket matrix banner");
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "array" && format != "coordinate")
    throw InvalidInput("matrix market: format must be array or coordinate");
  if (field != "real" && field != "integer" && field != "double")
    throw InvalidInput("matrix market: only real or integer fields are supported");
  if (symmetry != "general" && symmetry != "symmetric")
    throw InvalidInput("matrix market: symmetry must be general or symmetric");
  const bool symmetric = symmetry == "symmetric";

  do {
    if (!std::getline(in, line)) throw InvalidInput("matrix market: missing size line");
  } while (line.empty() || line[0] == '%');
  std::istringstream size_line(line);
  long rows = 0, cols = 0, nnz = 0;
  size_line >> rows >> cols;
  if (format == "coordinate") size_line >> nnz;
  if (!size_line || rows <= 0 || cols <= 0) throw InvalidInput("matrix market: bad size line");
  if (symmetric && rows != cols) throw InvalidInput("matrix market: symmetric matrix must be square");

  Matrix<double> m = Matrix<double>::Zero(rows, cols);
  const auto next_value = [&](double& v) -> std::istream& { return in >> v; };
  if (format == "array") {
    for (long c = 0; c < cols; ++c) {
      for (long r = symmetric ? c : 0; r < rows; ++r) {
        double v;
        if (!next_value(v)) throw InvalidInput("matrix market: too few array entries");
        m(r, c) = v;
        if (symmetric) m(c, r) = v;
      }
    }
  } else {
    for (long k = 0; k < nnz; ++k) {
      long r, c;
      double v;
      if (!(in >> r >> c) || !next_value(v)) throw InvalidInput("matrix market: too few coordinate entries");
      if (r < 1 || r > rows || c < 1 || c > cols) throw InvalidInput("matrix market: index out of range");
      m(r - 1, c - 1) = v;
      if (symmetric) m(c - 1, r - 1) = v;
    }
  }
  if (!all_finite(m)) throw InvalidInput("matrix market: entries must be finite");
  return m;
}

Matrix<double> read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open matrix market file " + path.string());
  return read_matrix_market(in);
}

ProblemFile parse_problem(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw InvalidInput("problem file must be a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string()) throw InvalidInput("missing string field kind");
  ProblemFile pf;
  pf.kind = j["kind"].get<std::string>();
  pf.A = parse_matrix_field(j, "A", base_dir);
  if (!all_finite(pf.A)) throw InvalidInput("A must be finite");

  if (pf.kind == "prs") {
    if (pf.A.rows() != pf.A.cols()) throw InvalidInput("prs: A must be square");
    if (!j.contains("b")) throw InvalidInput("missing field b");
    pf.b = parse_vector(j["b"], "b");
    if (!j.contains("p")) throw InvalidInput("prs: missing field p");
    pf.p = number_field(j, "p", 0.0);
    pf.rho = number_field(j, "rho", 1.0);
    pf.prs();
  } else if (pf.kind == "be") {
    if (!j.contains("b")) throw InvalidInput("missing field b");
    pf.b = parse_vector(j["b"], "b");
    pf.be();
  } else if (pf.kind == "pair") {
    pf.B = parse_matrix_field(j, "B", base_dir);
    const Eigen::Index n = pf.A.rows();
    pf.a = j.contains("a") ? parse_vector(j["a"], "a") : Vector<double>::Zero(n);
    pf.b = j.contains("b") ? parse_vector(j["b"], "b") : Vector<double>::Zero(n);
    pf.p = number_field(j, "p", 0.0);
    pf.q = number_field(j, "q", 0.0);
    pf.pair();
  } else {
    throw InvalidInput("kind must be \"prs\", \"be\" or \"pair\", got \"" + pf.kind + "\"");
  }
  return pf;
}

ProblemFile load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open problem file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
  return parse_problem(j, path.parent_path());
}

Json to_json(const Vector<double>& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const Matrix<double>& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Vector<double>(m.row(r).transpose())));
  return out;
}

Json problem_to_json(const ProblemFile& pf) {
  Json j;
  j["kind"] = pf.kind;
  j["A"] = to_json(pf.A);
  if (pf.kind == "pair") {
    j["B"] = to_json(pf.B);
    j["a"] = to_json(pf.a);
    j["b"] = to_json(pf.b);
    j["p"] = pf.p.value_or(0.0);
    j["q"] = pf.q;
    return j;
  }
  j["b"] = to_json(pf.b);
  if (pf.kind == "prs") {
    j["p"] = pf.p.value_or(3.0);
    j["rho"] = pf.rho;
  }
  return j;
}

Json to_json(const CertificateReport<double>& c, bool include_matrix) {
  Json j;
  j["kind"] = to_string(c.kind);
  j["lambda"] = c.lambda;
  j[c.kind == CertificateKind::PRS ? "t" : "w"] = c.parameter;
  j["min_eigenvalue"] = c.min_eigenvalue;
  j["tolerance"] = c.tolerance_used;
  j["verdict"] = c.verdict;
  if (include_matrix) j["block_matrix"] = to_json(c.block_matrix.matrix());
  return j;
}

Json to_json(const OracleReport<double>& r) {
  Json j;
  j["value"] = r.value;
  j["x"] = to_json(r.x);
  j["starts"] = r.starts;
  j["best_start_index"] = r.best_start_index;
  j["spread"] = r.spread;
  return j;
}

Json to_json(const ProbeReport<double>& r) {
  Json j;
  j["samples"] = r.samples;
  j["trials"] = r.trials;
  j["realized"] = r.realized;
  j["fraction"] = r.fraction;
  j["worst_residual"] = r.worst_residual;
  j["seed"] = r.seed;
  return j;
}

void write_json(std::ostream& out, const Json& j, int indent) {
  write_value(out, j, indent, 0);
  out << '\n';
}

std::string dump_json(const Json& j, int indent) {
  std::ostringstream ss;
  write_json(ss, j, indent);
  return ss.str();
}

}  // namespace hcx::io
