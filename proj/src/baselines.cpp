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

#include "irscoop/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace irscoop {

const char* to_string(SchemeId id) {
  switch (id) {
    case SchemeId::CoopWithIrs: return "coop_irs";
    case SchemeId::IndepWithIrs: return "indep_irs";
    case SchemeId::CoopNoIrs: return "coop_no_irs";
    case SchemeId::IndepNoIrs: return "indep_no_irs";
  }
  return "unknown";
}

SchemeId scheme_from_string(const std::string& name) {
  for (SchemeId id : {SchemeId::CoopWithIrs, SchemeId::IndepWithIrs, SchemeId::CoopNoIrs,
                      SchemeId::IndepNoIrs}) {
    if (name == to_string(id)) return id;
  }
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

HttGains htt_gains(const ChannelRealization& r, const HttPhases& phases) {
  phases.validate(r.n_elements());
  const CompositeChannels c = composite_gamma(r);
  HttGains g;
  g.e1 = reflect_gain(phases.energy, c.gamma_1, r.alpha_1);
  g.e2 = reflect_gain(phases.energy, c.gamma_2, r.alpha_2);
  g.d1 = reflect_gain(phases.wd1, c.gamma_1, r.alpha_1);
  g.d2 = reflect_gain(phases.wd2, c.gamma_2, r.alpha_2);
  return g;
}

namespace {

enum class HttLink { Energy1, Energy2, Up1, Up2 };

struct HttLayout {
  int r_bar = -1, r1 = -1, r2 = -1;
  int t0 = -1, t1 = -1, t2 = -1;
  int tau1 = -1, tau2 = -1;
  int we = -1, wi1 = -1, wi2 = -1;
};

using HttGainFn = std::function<void(LinearExpr&, HttLink, double)>;

HttLayout declare_htt_scalars(ConeProblem& p, Objective obj, double kappa) {
  HttLayout l;
  if (obj.weighted) {
    l.r1 = p.add_scalar("R1", 0.0);
    l.r2 = p.add_scalar("R2", 0.0);
  } else {
    l.r_bar = p.add_scalar("R", -kInf);
  }
  l.t0 = p.add_scalar("t0");
  l.t1 = p.add_scalar("t1");
  l.t2 = p.add_scalar("t2");
  l.tau1 = p.add_scalar("tau1", 0.0, kInf, kappa);
  l.tau2 = p.add_scalar("tau2", 0.0, kInf, kappa);
  return l;
}

void add_htt_constraints(ConeProblem& p, const HttLayout& l, const SystemParams& params,
                         Objective obj, const HttGainFn& gain) {
  LinearExpr time;
  time.add(l.t0, 1.0).add(l.t1, 1.0).add(l.t2, 1.0).add_constant(-params.horizon);
  p.add_linear("time", time);
  const double harvest = params.eta * params.p_hap;
  LinearExpr e1;
  e1.add(l.tau1, 1.0);
  gain(e1, HttLink::Energy1, -harvest);
  p.add_linear("energy_1", e1);
  LinearExpr e2;
  e2.add(l.tau2, 1.0);
  gain(e2, HttLink::Energy2, -harvest);
  p.add_linear("energy_2", e2);

  const double rho = params.rho();
  PerspectiveLogTerm f1;
  f1.t_var = l.t1;
  gain(f1.argument, HttLink::Up1, rho);
  PerspectiveLogTerm f2;
  f2.t_var = l.t2;
  gain(f2.argument, HttLink::Up2, rho);
  p.add_hypograph("R1", LinearExpr{}.add(obj.weighted ? l.r1 : l.r_bar, 1.0), {f1});
  p.add_hypograph("R2", LinearExpr{}.add(obj.weighted ? l.r2 : l.r_bar, 1.0), {f2});
  if (obj.weighted) {
    p.objective.add(l.r1, obj.omega).add(l.r2, 1.0 - obj.omega);
  } else {
    p.objective.add(l.r_bar, 1.0);
  }
}

double htt_score(const HttGains& g, double t0, double t1, double t2, double tau1, double tau2,
                 const SystemParams& params, Objective obj) {
  const double harvest = params.eta * params.p_hap * t0;
  const double f1 = tau1 > 0.0 ? std::min(1.0, harvest * g.e1 / tau1) : 1.0;
  const double f2 = tau2 > 0.0 ? std::min(1.0, harvest * g.e2 / tau2) : 1.0;
  const double rho = params.rho();
  return obj.value(perspective_log2(t1, rho * g.d1 * tau1 * f1),
                   perspective_log2(t2, rho * g.d2 * tau2 * f2));
}

}  // namespace

HttRefit solve_htt_allocation(const HttGains& g, const SystemParams& params,
                              const SolverSettings& settings, Objective objective) {
  params.validate();
  for (double x : {g.e1, g.e2, g.d1, g.d2}) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("solve_htt_allocation: bad gain");
  }
  const double top = std::max(g.e1, g.e2);
  const double kappa = params.eta * params.p_hap * (top > 0.0 ? top : 1.0);
  ConeProblem p;
  const HttLayout l = declare_htt_scalars(p, objective, kappa);
  add_htt_constraints(p, l, params, objective, [&](LinearExpr& e, HttLink k, double w) {
    switch (k) {
      case HttLink::Energy1: e.add(l.t0, w * g.e1); break;
      case HttLink::Energy2: e.add(l.t0, w * g.e2); break;
      case HttLink::Up1: e.add(l.tau1, w * g.d1); break;
      case HttLink::Up2: e.add(l.tau2, w * g.d2); break;
    }
  });
  const SolveResult res = solve(p, settings);
  HttRefit out;
  out.status = res.status;
  out.objective = res.objective;
  out.upper_bound = res.upper_bound;
  out.message = res.message;
  if (res.assignment.scalars.empty()) return out;
  const auto& y = res.assignment.scalars;
  auto nonneg = [](double v) { return std::max(0.0, v); };
  HttAllocation& a = out.alloc;
  a.t0 = nonneg(y[l.t0]);
  a.t1 = nonneg(y[l.t1]);
  a.t2 = nonneg(y[l.t2]);
  a.p1 = a.t1 > 0.0 ? nonneg(y[l.tau1]) / a.t1 : 0.0;
  a.p2 = a.t2 > 0.0 ? nonneg(y[l.tau2]) / a.t2 : 0.0;
  return out;
}

RecoveredSolution maximize_independent(const ChannelRealization& r, const SystemParams& params,
                                       const OptimizerSettings& settings, Objective obj) {
  settings.validate();
  params.validate();
  const Eigen::Index n = r.n_elements();
  RecoveredSolution out;
  out.scheme = n > 0 ? SchemeId::IndepWithIrs : SchemeId::IndepNoIrs;
  HttPhases phases = HttPhases::all_ones(n);

  const LiftedChannels lifted = lift_channels(r);
  const double kappa = energy_unit(lifted, params);
  ConeProblem p;
  HttLayout l = declare_htt_scalars(p, obj, kappa);
  const Eigen::Index d = lifted.dim();
  l.we = p.add_matrix("WE", d, l.t0);
  l.wi1 = p.add_matrix("WI1", d, l.tau1);
  l.wi2 = p.add_matrix("WI2", d, l.tau2);
  add_htt_constraints(p, l, params, obj, [&](LinearExpr& e, HttLink k, double w) {
    switch (k) {
      case HttLink::Energy1: e.add_trace(l.we, lifted.psi_1, w); break;
      case HttLink::Energy2: e.add_trace(l.we, lifted.psi_2, w); break;
      case HttLink::Up1: e.add_trace(l.wi1, lifted.psi_1, w); break;
      case HttLink::Up2: e.add_trace(l.wi2, lifted.psi_2, w); break;
    }
  });
  const SolveResult rel = solve(p, settings.solver);
  out.status = rel.status;
  out.r_bar_star = rel.upper_bound;
  out.iterations = rel.iterations;
  out.message = rel.message;

  if (rel.status != SolveStatus::Infeasible && n > 0 && !rel.assignment.scalars.empty()) {
    const auto& y = rel.assignment.scalars;
    const auto& w = rel.assignment.matrices;
    const double t0 = y[l.t0], t1 = y[l.t1], t2 = y[l.t2];
    const double tau1 = y[l.tau1], tau2 = y[l.tau2];
    auto ratio = [](const CMatrix& m, const CMatrix& psi, double s) {
      return s > 0.0 ? (psi * m).trace().real() / s : 0.0;
    };
    HttGains relaxed;
    relaxed.e1 = ratio(w[l.we], lifted.psi_1, t0);
    relaxed.e2 = ratio(w[l.we], lifted.psi_2, t0);
    relaxed.d1 = ratio(w[l.wi1], lifted.psi_1, tau1);
    relaxed.d2 = ratio(w[l.wi2], lifted.psi_2, tau2);
    const CompositeChannels c = composite_gamma(r);
    auto recover = [&](const CMatrix& m, double s, auto&& patch) -> CVector {
      auto score = [&](const CVector& v) {
        HttGains g = relaxed;
        patch(g, v);
        return htt_score(g, t0, t1, t2, tau1, tau2, params, obj);
      };
      return recover_v(m / s, score, settings.randomization_trials, settings.seed).v;
    };
    const double tau_zero = 1e-9 * kappa;
    if (t0 > 1e-9) {
      phases.energy = recover(w[l.we], t0, [&](HttGains& g, const CVector& v) {
        g.e1 = reflect_gain(v, c.gamma_1, r.alpha_1);
        g.e2 = reflect_gain(v, c.gamma_2, r.alpha_2);
      });
    }
    if (tau1 > tau_zero) {
      phases.wd1 = recover(w[l.wi1], tau1, [&](HttGains& g, const CVector& v) {
        g.d1 = reflect_gain(v, c.gamma_1, r.alpha_1);
      });
    }
    if (tau2 > tau_zero) {
      phases.wd2 = recover(w[l.wi2], tau2, [&](HttGains& g, const CVector& v) {
        g.d2 = reflect_gain(v, c.gamma_2, r.alpha_2);
      });
    }
  }

  const HttRefit fit = solve_htt_allocation(htt_gains(r, phases), params, settings.solver, obj);
  if (fit.status != SolveStatus::Optimal && out.status == SolveStatus::Optimal) {
    out.status = fit.status;
    out.message = "refit: " + fit.message;
  }
  const HttRateReport rates = evaluate_htt_rates(r, phases, params, fit.alloc);
  out.plan = HttPlan{phases, fit.alloc, rates};
  out.r1 = rates.r1;
  out.r2 = rates.r2;
  out.min_rate = rates.min_rate;
  out.objective = obj.value(rates.r1, rates.r2);
  out.gap = out.r_bar_star - out.objective;
  return out;
}

RecoveredSolution solve_scheme(SchemeId scheme, const ChannelRealization& r,
                               const SystemParams& params, const OptimizerSettings& settings,
                               Objective obj) {
  auto coop = [&](const ChannelRealization& x) {
    return obj.weighted ? maximize_weighted_sum(x, params, obj.omega, settings)
                        : maximize_common_throughput(x, params, settings);
  };
  RecoveredSolution out;
  switch (scheme) {
    case SchemeId::CoopWithIrs: out = coop(r); break;
    case SchemeId::CoopNoIrs: out = coop(r.without_irs()); break;
    case SchemeId::IndepWithIrs: out = maximize_independent(r, params, settings, obj); break;
    case SchemeId::IndepNoIrs:
      out = maximize_independent(r.without_irs(), params, settings, obj);
      break;
  }
  out.scheme = scheme;
  return out;
}

}  // namespace irscoop
