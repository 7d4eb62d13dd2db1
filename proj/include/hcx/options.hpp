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

namespace hcx {

struct SolverOptions {
  int max_iter = 200;
  /// Relative tolerance on the derivative of the univariate dual.
  double stationarity_tol = 1e-10;
  /// Relative tolerance for PSD certificate verdicts.
  double certificate_tol = 1e-8;
};

}  // namespace hcx
