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

#include "hcx/backward_error.hpp"
#include "hcx/be_problem.hpp"
#include "hcx/certificates.hpp"
#include "hcx/errors.hpp"
#include "hcx/joint_range.hpp"
#include "hcx/linalg.hpp"
#include "hcx/options.hpp"
#include "hcx/oracle.hpp"
#include "hcx/prs.hpp"
#include "hcx/prs_problem.hpp"
#include "hcx/trs.hpp"
