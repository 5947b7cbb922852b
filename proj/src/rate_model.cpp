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

#include "irscoop/rate_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irscoop {

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

SystemParams SystemParams::from_dbm(double p_hap_dbm, double eta, double n0_dbm) {
  SystemParams p;
  p.p_hap = dbm_to_watt(p_hap_dbm);
  p.eta = eta;
  p.n0 = dbm_to_watt(n0_dbm);
  return p;
}

void SystemParams::validate() const {
  if (!(p_hap > 0.0)) throw std::invalid_argument("params: p_hap must be positive");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("params: eta must lie in (0,1)");
  if (!(n0 > 0.0)) throw std::invalid_argument("params: n0 must be positive");
  if (!(horizon > 0.0)) throw std::invalid_argument("params: horizon must be positive");
}

void require_unit_modulus(const CVector& v, double tol) {
  for (Eigen::Index n = 0; n < v.size(); ++n) {
    if (std::abs(std::abs(v[n]) - 1.0) > tol) {
      throw std::invalid_argument("phase vector entry is not unit modulus");
    }
  }
}

PhaseConfig PhaseConfig::all_ones(Eigen::Index n) {
  const CVector ones = CVector::Ones(n);
  return {ones, ones, ones, ones};
}

void PhaseConfig::validate(Eigen::Index n, double tol) const {
  for (const CVector* v : {&v1, &v2, &v3, &v4}) {
    if (v->size() != n) throw std::invalid_argument("phase vector length != N");
    require_unit_modulus(*v, tol);
  }
}

void Allocation::validate() const {
  for (double x : {t1, t21, t22, t31, t32, p21, p22, p31, p32}) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument("allocation entries must be finite and nonnegative");
    }
  }
}

double reflect_gain(const CVector& v, const CVector& gamma, cplx alpha) {
  if (v.size() != gamma.size()) throw std::invalid_argument("reflect_gain: length mismatch");
  cplx sum = alpha;
  for (Eigen::Index n = 0; n < v.size(); ++n) sum += v[n] * gamma[n];
  return std::norm(sum);
}

double perspective_rate(double t, double x) { return perspective_log2(t, x); }

HarvestedEnergy harvested_energy(const ChannelRealization& r, const CVector& v1,
                                 const SystemParams& params, double t1) {
  require_unit_modulus(v1);
  const CompositeChannels c = composite_gamma(r);
  const double scale = params.eta * params.p_hap * t1;
  return {scale * reflect_gain(v1, c.gamma_1, r.alpha_1),
          scale * reflect_gain(v1, c.gamma_2, r.alpha_2)};
}

ExchangeRates exchange_rates(const ChannelRealization& r, const CVector& v2,
                             const CVector& v3, const SystemParams& params,
                             const Allocation& a) {
  require_unit_modulus(v2);
  require_unit_modulus(v3);
  const CompositeChannels c = composite_gamma(r);
  const double rho = params.rho();
  // Energies t * P enter the perspective form t log2(1 + rho g tau / t).
  const double tau21 = a.t21 * a.p21;
  const double tau22 = a.t22 * a.p22;
  ExchangeRates out;
  out.r1_2 = perspective_rate(a.t21, rho * reflect_gain(v2, c.gamma_21, r.alpha_12) * tau21);
  out.r0_21 = perspective_rate(a.t21, rho * reflect_gain(v2, c.gamma_1, r.alpha_1) * tau21);
  out.r2_2 = perspective_rate(a.t22, rho * reflect_gain(v3, c.gamma_22, r.alpha_12) * tau22);
  out.r0_22 = perspective_rate(a.t22, rho * reflect_gain(v3, c.gamma_2, r.alpha_2) * tau22);
  return out;
}

JointRates joint_rates(const ChannelRealization& r, const CVector& v4,
                       const SystemParams& params, const Allocation& a) {
  require_unit_modulus(v4);
  const CompositeChannels c = composite_gamma(r);
  const double snr = params.rho() * (a.p31 * reflect_gain(v4, c.gamma_1, r.alpha_1) +
                                     a.p32 * reflect_gain(v4, c.gamma_2, r.alpha_2));
  const double capacity = std::log1p(snr) / kLn2;
  return {a.t31 * capacity, a.t32 * capacity};
}

UserRates user_rates(double r1_2, double r0_21, double r1_3, double r2_2, double r0_22,
                     double r2_3) {
  UserRates u;
  u.r1 = std::min(r1_2, r0_21 + r1_3);
  u.r2 = std::min(r2_2, r0_22 + r2_3);
  u.min_rate = std::min(u.r1, u.r2);
  return u;
}

RateReport evaluate_rates(const ChannelRealization& r, const PhaseConfig& phases,
                          const SystemParams& params, const Allocation& alloc) {
  phases.validate(r.n_elements());
  const HarvestedEnergy e = harvested_energy(r, phases.v1, params, alloc.t1);
  const ExchangeRates x = exchange_rates(r, phases.v2, phases.v3, params, alloc);
  const JointRates j = joint_rates(r, phases.v4, params, alloc);
  const UserRates u = user_rates(x.r1_2, x.r0_21, j.r1_3, x.r2_2, x.r0_22, j.r2_3);
  RateReport rep;
  rep.e1 = e.e1;
  rep.e2 = e.e2;
  rep.r1_2 = x.r1_2;
  rep.r0_21 = x.r0_21;
  rep.r2_2 = x.r2_2;
  rep.r0_22 = x.r0_22;
  rep.r1_3 = j.r1_3;
  rep.r2_3 = j.r2_3;
  rep.r1 = u.r1;
  rep.r2 = u.r2;
  rep.min_rate = u.min_rate;
  return rep;
}

namespace {

double relative_slack(double budget, double spent) {
  const double denom = std::max(budget, spent);
  if (denom <= 0.0) return 0.0;
  return (budget - spent) / denom;
}

void finish(FeasibilityReport& rep, double e1, double spent1, double e2, double spent2,
            double tol) {
  rep.energy_slack_1 = e1 - spent1;
  rep.energy_slack_2 = e2 - spent2;
  rep.relative_energy_slack_1 = relative_slack(e1, spent1);
  rep.relative_energy_slack_2 = relative_slack(e2, spent2);
  rep.worst_slack = std::min({rep.time_slack, rep.relative_energy_slack_1,
                              rep.relative_energy_slack_2});
  rep.feasible = rep.worst_slack >= -tol;
}

}  // namespace

FeasibilityReport check_feasibility(const ChannelRealization& r, const PhaseConfig& phases,
                                    const SystemParams& params, const Allocation& a,
                                    double tol) {
  FeasibilityReport rep;
  rep.time_slack = params.horizon - a.total_time();
  const HarvestedEnergy e = harvested_energy(r, phases.v1, params, a.t1);
  const double spent1 = a.t21 * a.p21 + (a.t31 + a.t32) * a.p31;
  const double spent2 = a.t22 * a.p22 + (a.t31 + a.t32) * a.p32;
  finish(rep, e.e1, spent1, e.e2, spent2, tol);
  for (double x : {a.t1, a.t21, a.t22, a.t31, a.t32, a.p21, a.p22, a.p31, a.p32}) {
    if (x < 0.0) rep.feasible = false;
  }
  return rep;
}

HttPhases HttPhases::all_ones(Eigen::Index n) {
  const CVector ones = CVector::Ones(n);
  return {ones, ones, ones};
}

void HttPhases::validate(Eigen::Index n, double tol) const {
  for (const CVector* v : {&energy, &wd1, &wd2}) {
    if (v->size() != n) throw std::invalid_argument("phase vector length != N");
    require_unit_modulus(*v, tol);
  }
}

HttRateReport evaluate_htt_rates(const ChannelRealization& r, const HttPhases& phases,
                                 const SystemParams& params, const HttAllocation& a) {
  phases.validate(r.n_elements());
  const CompositeChannels c = composite_gamma(r);
  HttRateReport rep;
  const double scale = params.eta * params.p_hap * a.t0;
  rep.e1 = scale * reflect_gain(phases.energy, c.gamma_1, r.alpha_1);
  rep.e2 = scale * reflect_gain(phases.energy, c.gamma_2, r.alpha_2);
  const double rho = params.rho();
  rep.r1 = perspective_rate(a.t1, rho * reflect_gain(phases.wd1, c.gamma_1, r.alpha_1) * a.t1 * a.p1);
  rep.r2 = perspective_rate(a.t2, rho * reflect_gain(phases.wd2, c.gamma_2, r.alpha_2) * a.t2 * a.p2);
  rep.min_rate = std::min(rep.r1, rep.r2);
  return rep;
}

FeasibilityReport check_htt_feasibility(const ChannelRealization& r, const HttPhases& phases,
                                        const SystemParams& params, const HttAllocation& a,
                                        double tol) {
  FeasibilityReport rep;
  rep.time_slack = params.horizon - a.total_time();
  const HttRateReport rates = evaluate_htt_rates(r, phases, params, a);
  finish(rep, rates.e1, a.t1 * a.p1, rates.e2, a.t2 * a.p2, tol);
  for (double x : {a.t0, a.t1, a.t2, a.p1, a.p2}) {
    if (x < 0.0) rep.feasible = false;
  }
  return rep;
}

}  // namespace irscoop
