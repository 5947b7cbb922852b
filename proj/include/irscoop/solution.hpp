// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The irscoop Authors
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

#include <string>
#include <variant>

#include "irscoop/convex_engine.hpp"
#include "irscoop/rate_model.hpp"

namespace irscoop {

enum class SchemeId { CoopWithIrs, IndepWithIrs, CoopNoIrs, IndepNoIrs };

/// Stable lowercase identifiers used in configs and CSV files:
/// coop_irs, indep_irs, coop_no_irs, indep_no_irs.
const char* to_string(SchemeId id);
/// Throws std::invalid_argument on an unknown name.
SchemeId scheme_from_string(const std::string& name);

/// Three-phase cooperation protocol.
struct CoopPlan {
  PhaseConfig phases;
  Allocation alloc;
  RateReport rates;
};

/// Harvest-then-transmit protocol.
struct HttPlan {
  HttPhases phases;
  HttAllocation alloc;
  HttRateReport rates;
};

struct RecoveredSolution {
  SchemeId scheme = SchemeId::CoopWithIrs;
  SolveStatus status = SolveStatus::Optimal;
  std::variant<CoopPlan, HttPlan> plan;
  double r1 = 0.0;
  double r2 = 0.0;
  double min_rate = 0.0;
  /// Value of the optimized objective at the recovered point (min-rate or
  /// weighted sum).
  double objective = 0.0;
  /// Optimum of the relaxation, an upper bound on `objective`.
  double r_bar_star = 0.0;
  /// r_bar_star - objective.
  double gap = 0.0;
  int iterations = 0;
  std::string message;
};

}  // namespace irscoop
