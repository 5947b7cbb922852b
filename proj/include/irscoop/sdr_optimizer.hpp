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

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "irscoop/channel_model.hpp"
#include "irscoop/convex_engine.hpp"
#include "irscoop/rate_model.hpp"
#include "irscoop/solution.hpp"

namespace irscoop {

/// Max-min throughput, or the weighted sum omega R1 + (1 - omega) R2.
struct Objective {
  bool weighted = false;
  double omega = 0.5;

  static Objective min_rate() { return {}; }
  static Objective weighted_sum(double omega);
  double value(double r1, double r2) const;
};

/// Variable indices inside the relaxed problem.
struct P3Layout {
  int r_bar = -1;       // common rate (min-rate objective)
  int r1 = -1, r2 = -1; // per-user rates (weighted objective)
  int t1 = -1, t21 = -1, t22 = -1, t31 = -1, t32 = -1;
  int tau21 = -1, tau22 = -1, tau31 = -1, tau31p = -1, tau32 = -1, tau32p = -1;
  int w1 = -1, w2 = -1, w3 = -1, w41 = -1, w41p = -1, w42 = -1, w42p = -1;
};

struct P3Problem {
  ConeProblem problem;
  P3Layout layout;
  Objective objective;
  double energy_unit = 1.0;  // scale given to the tau variables
};

/// eta * P1 * the larger single-user beamforming gain; falls back to eta * P1
/// when both channels vanish.
double energy_unit(const LiftedChannels& lifted, const SystemParams& params);

P3Problem build_p3(const LiftedChannels& lifted, const SystemParams& params,
                   Objective objective = {});

struct RelaxedSolution {
  SolveStatus status = SolveStatus::NumericalLimit;
  double r_bar_star = 0.0;  // certified upper bound on the relaxed optimum
  double achieved = 0.0;    // objective of the returned point
  double r1 = 0.0, r2 = 0.0;
  std::array<double, 5> t{};    // t1, t21, t22, t31, t32
  std::array<double, 6> tau{};  // tau21, tau22, tau31, tau31', tau32, tau32'
  std::array<CMatrix, 7> w;     // W1, W2, W3, W41, W41', W42, W42'
  int iterations = 0;
  std::string message;
};

RelaxedSolution solve_relaxation(const P3Problem& p3, const SolverSettings& settings = {});

/// Unit-modulus v with lift_phase(v) proportional to v_bar (up to a common
/// phase): v_n = exp(-j arg(v_bar_n / v_bar_N)).
CVector extract_phases(const CVector& v_bar);

struct RecoveryResult {
  CVector v;
  double score = 0.0;
  int best_trial = -1;
  std::vector<double> best_so_far;  // running maximum after each trial
};

/// Gaussian randomization: candidates U Sigma^(1/2) r with r ~ CN(0, I),
/// scored after phase extraction. Ties keep the earliest trial.
RecoveryResult recover_v(const CMatrix& v_star, const std::function<double(const CVector&)>& score,
                         int trials, std::uint64_t seed);

/// Channel gains the protocol sees under fixed phases. The joint phase
/// keeps separate gains per sub-slot so that relaxed solutions fit too.
struct PhaseGains {
  double e1 = 0.0, e2 = 0.0;      // energy transfer
  double x21 = 0.0, x01 = 0.0;    // WD1 exchange: to WD2, to HAP
  double x22 = 0.0, x02 = 0.0;    // WD2 exchange: to WD1, to HAP
  double j1a = 0.0, j2a = 0.0;    // joint slot of WD1 data
  double j1b = 0.0, j2b = 0.0;    // joint slot of WD2 data
};

PhaseGains phase_gains(const ChannelRealization& realization, const PhaseConfig& phases);

struct RefitResult {
  SolveStatus status = SolveStatus::NumericalLimit;
  Allocation alloc;
  double objective = 0.0;    // solver value before the joint-power merge
  double upper_bound = 0.0;
  std::string message;
};

/// Optimal durations and energies for fixed gains. Joint-phase powers are
/// merged into one power per device over t31 + t32, which never lowers
/// either user's rate.
RefitResult solve_allocation(const PhaseGains& gains, const SystemParams& params,
                             const SolverSettings& settings = {}, Objective objective = {});

struct RefitReport {
  RefitResult refit;
  RateReport rates;
};

RefitReport refit_allocation(const ChannelRealization& realization, const PhaseConfig& phases,
                             const SystemParams& params, const SolverSettings& settings = {},
                             Objective objective = {});

struct OptimizerSettings {
  SolverSettings solver;
  int randomization_trials = 500;
  std::uint64_t seed = 0x2545F4914F6CDD1DULL;

  void validate() const;
};

RecoveredSolution maximize_common_throughput(const ChannelRealization& realization,
                                             const SystemParams& params,
                                             const OptimizerSettings& settings = {});

RecoveredSolution maximize_weighted_sum(const ChannelRealization& realization,
                                        const SystemParams& params, double omega,
                                        const OptimizerSettings& settings = {});

}  // namespace irscoop
