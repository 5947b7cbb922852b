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

#include "irscoop/channel_model.hpp"
#include "irscoop/rate_model.hpp"
#include "irscoop/sdr_optimizer.hpp"
#include "irscoop/solution.hpp"

namespace irscoop {

/// Harvest-then-transmit gains under fixed phases.
struct HttGains {
  double e1 = 0.0, e2 = 0.0;  // energy phase
  double d1 = 0.0, d2 = 0.0;  // uplink of each device in its own slot
};

HttGains htt_gains(const ChannelRealization& realization, const HttPhases& phases);

struct HttRefit {
  SolveStatus status = SolveStatus::NumericalLimit;
  HttAllocation alloc;
  double objective = 0.0;
  double upper_bound = 0.0;
  std::string message;
};

/// Optimal t0, t1, t2 and transmit powers for fixed gains.
HttRefit solve_htt_allocation(const HttGains& gains, const SystemParams& params,
                              const SolverSettings& settings = {}, Objective objective = {});

/// Independent transmission: SDR over the three phase vectors when the
/// realization has a surface, a pure allocation problem otherwise.
RecoveredSolution maximize_independent(const ChannelRealization& realization,
                                       const SystemParams& params,
                                       const OptimizerSettings& settings = {},
                                       Objective objective = {});

/// Runs `scheme` on `realization`. The no-surface schemes strip the
/// reflecting paths first.
RecoveredSolution solve_scheme(SchemeId scheme, const ChannelRealization& realization,
                               const SystemParams& params,
                               const OptimizerSettings& settings = {},
                               Objective objective = {});

}  // namespace irscoop
