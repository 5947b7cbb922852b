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

#include "irscoop/channel_model.hpp"

namespace irscoop {

/// Physical constants of the network. Powers in W.
struct SystemParams {
  double p_hap = 1.0;   // HAP transmit power P1
  double eta = 0.8;     // energy harvesting efficiency
  double n0 = 1e-11;    // receiver noise power
  double horizon = 1.0; // block length T; rates are normalized by it

  static SystemParams from_dbm(double p_hap_dbm, double eta, double n0_dbm);
  double rho() const { return 1.0 / n0; }
  void validate() const;
};

double dbm_to_watt(double dbm);

/// Reflection vectors of the four protocol phases (energy transfer, WD1
/// exchange, WD2 exchange, joint transmission). Unit modulus throughout.
struct PhaseConfig {
  CVector v1, v2, v3, v4;

  static PhaseConfig all_ones(Eigen::Index n);
  /// Throws std::invalid_argument on a length mismatch or |v| != 1.
  void validate(Eigen::Index n, double tol = 1e-9) const;
};

/// Durations (fractions of T) and device transmit powers of the cooperative
/// protocol. WD_i sends with p2i during its exchange slot and p3i during the
/// whole joint-transmission phase t31 + t32.
struct Allocation {
  double t1 = 0.0, t21 = 0.0, t22 = 0.0, t31 = 0.0, t32 = 0.0;
  double p21 = 0.0, p22 = 0.0, p31 = 0.0, p32 = 0.0;

  double total_time() const { return t1 + t21 + t22 + t31 + t32; }
  void validate() const;
};

struct RateReport {
  double e1 = 0.0, e2 = 0.0;
  double r1_2 = 0.0, r0_21 = 0.0;
  double r2_2 = 0.0, r0_22 = 0.0;
  double r1_3 = 0.0, r2_3 = 0.0;
  double r1 = 0.0, r2 = 0.0;
  double min_rate = 0.0;
};

/// |v . gamma + alpha|^2 (no conjugation on v).
double reflect_gain(const CVector& v, const CVector& gamma, cplx alpha);

/// t log2(1 + x / t), extended by its limit 0 at t = 0.
double perspective_rate(double t, double x);

/// Throws std::invalid_argument when a phase entry is off the unit circle.
void require_unit_modulus(const CVector& v, double tol = 1e-9);

struct HarvestedEnergy {
  double e1 = 0.0;
  double e2 = 0.0;
};

HarvestedEnergy harvested_energy(const ChannelRealization& r, const CVector& v1,
                                 const SystemParams& params, double t1);

struct ExchangeRates {
  double r1_2 = 0.0, r0_21 = 0.0;
  double r2_2 = 0.0, r0_22 = 0.0;
};

ExchangeRates exchange_rates(const ChannelRealization& r, const CVector& v2,
                             const CVector& v3, const SystemParams& params,
                             const Allocation& alloc);

struct JointRates {
  double r1_3 = 0.0;
  double r2_3 = 0.0;
};

/// Alamouti joint transmission: both devices' SNRs add inside one log.
JointRates joint_rates(const ChannelRealization& r, const CVector& v4,
                       const SystemParams& params, const Allocation& alloc);

struct UserRates {
  double r1 = 0.0;
  double r2 = 0.0;
  double min_rate = 0.0;
};

/// R_i = min(R_i^(2), R_0^(2i) + R_i^(3)).
UserRates user_rates(double r1_2, double r0_21, double r1_3, double r2_2,
                     double r0_22, double r2_3);

RateReport evaluate_rates(const ChannelRealization& r, const PhaseConfig& phases,
                          const SystemParams& params, const Allocation& alloc);

struct FeasibilityReport {
  bool feasible = true;
  double time_slack = 0.0;      // T - sum(t)
  double energy_slack_1 = 0.0;  // E_1 - energy spent by WD1 (J)
  double energy_slack_2 = 0.0;
  /// Energy slacks divided by max(E_i, spent_i); 0 when both are zero.
  double relative_energy_slack_1 = 0.0;
  double relative_energy_slack_2 = 0.0;
  double worst_slack = 0.0;     // min of time slack and relative energy slacks
};

FeasibilityReport check_feasibility(const ChannelRealization& r, const PhaseConfig& phases,
                                    const SystemParams& params, const Allocation& alloc,
                                    double tol = 1e-6);

// Harvest-then-transmit protocol used by the independent-transmission
// benchmarks: energy phase t0, then WD1 alone for t1 and WD2 alone for t2.

struct HttPhases {
  CVector energy, wd1, wd2;

  static HttPhases all_ones(Eigen::Index n);
  void validate(Eigen::Index n, double tol = 1e-9) const;
};

struct HttAllocation {
  double t0 = 0.0, t1 = 0.0, t2 = 0.0;
  double p1 = 0.0, p2 = 0.0;

  double total_time() const { return t0 + t1 + t2; }
};

struct HttRateReport {
  double e1 = 0.0, e2 = 0.0;
  double r1 = 0.0, r2 = 0.0;
  double min_rate = 0.0;
};

HttRateReport evaluate_htt_rates(const ChannelRealization& r, const HttPhases& phases,
                                 const SystemParams& params, const HttAllocation& alloc);

FeasibilityReport check_htt_feasibility(const ChannelRealization& r, const HttPhases& phases,
                                        const SystemParams& params,
                                        const HttAllocation& alloc, double tol = 1e-6);

}  // namespace irscoop
