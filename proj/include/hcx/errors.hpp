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

#include <stdexcept>
#include <string>

namespace hcx {

/// Malformed or non-finite input data.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A dual function was evaluated outside its admissible domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The instance falls outside what the reduction can solve (e.g. an empty
/// admissible multiplier interval).
class DegenerateInstance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An upstream invariant failed (e.g. the interpolation bracket is missing).
class InternalInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Iteration budget exhausted. Carries the best multiplier found so far.
class NoConvergence : public std::runtime_error {
 public:
  NoConvergence(const std::string& what, double best_lambda, int iterations)
      : std::runtime_error(what), best_lambda_(best_lambda), iterations_(iterations) {}

  double best_lambda() const { return best_lambda_; }
  int iterations() const { return iterations_; }

 private:
  double best_lambda_;
  int iterations_;
};

}  // namespace hcx
