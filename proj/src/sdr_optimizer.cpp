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

#include "irscoop/sdr_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace irscoop {

Objective Objective::weighted_sum(double omega) {
  if (!(omega >= 0.0 && omega <= 1.0)) {
    throw std::invalid_argument("weighted sum: omega must lie in [0, 1]");
  }
  return {true, omega};
}

double Objective::value(double r1, double r2) const {
  return weighted ? omega * r1 + (1.0 - omega) * r2 : std::min(r1, r2);
}

void OptimizerSettings::validate() const {
  solver.validate();
  if (randomization_trials < 1) {
    throw std::invalid_argument("optimizer settings: randomization_trials must be >= 1");
  }
}

namespace {

enum class Link { Energy1, Energy2, Exch21, Exch01, Exch22, Exch02, Joint1a, Joint2a, Joint1b, Joint2b };

using GainFn = std::function<void(LinearExpr&, Link, double)>;

// Declares the scalar variables shared by the relaxed and the fixed-phase
// problems.
P3Layout declare_scalars(ConeProblem& p, Objective obj, double kappa) {
  P3Layout l;
  if (obj.weighted) {
    l.r1 = p.add_scalar("R1", 0.0);
    l.r2 = p.add_scalar("R2", 0.0);
  } else {
    l.r_bar = p.add_scalar("R", -kInf);
  }
  l.t1 = p.add_scalar("t1");
  l.t21 = p.add_scalar("t21");
  l.t22 = p.add_scalar("t22");
  l.t31 = p.add_scalar("t31");
  l.t32 = p.add_scalar("t32");
  l.tau21 = p.add_scalar("tau21", 0.0, kInf, kappa);
  l.tau22 = p.add_scalar("tau22", 0.0, kInf, kappa);
  l.tau31 = p.add_scalar("tau31", 0.0, kInf, kappa);
  l.tau31p = p.add_scalar("tau31'", 0.0, kInf, kappa);
  l.tau32 = p.add_scalar("tau32", 0.0, kInf, kappa);
  l.tau32p = p.add_scalar("tau32'", 0.0, kInf, kappa);
  return l;
}

void add_protocol_constraints(ConeProblem& p, const P3Layout& l, const SystemParams& params,
                              Objective obj, const GainFn& gain) {
  const double rho = params.rho();
  const double harvest = params.eta * params.p_hap;

  LinearExpr time;
  for (int t : {l.t1, l.t21, l.t22, l.t31, l.t32}) time.add(t, 1.0);
  time.add_constant(-params.horizon);
  p.add_linear("time", time);

  LinearExpr energy1;
  energy1.add(l.tau21, 1.0).add(l.tau31, 1.0).add(l.tau31p, 1.0);
  gain(energy1, Link::Energy1, -harvest);
  p.add_linear("energy_1", energy1);
  LinearExpr energy2;
  energy2.add(l.tau22, 1.0).add(l.tau32, 1.0).add(l.tau32p, 1.0);
  gain(energy2, Link::Energy2, -harvest);
  p.add_linear("energy_2", energy2);

  auto term = [&](int t, std::initializer_list<Link> links) {
    PerspectiveLogTerm f;
    f.t_var = t;
    for (Link k : links) gain(f.argument, k, rho);
    return f;
  };
  const int lhs1 = obj.weighted ? l.r1 : l.r_bar;
  const int lhs2 = obj.weighted ? l.r2 : l.r_bar;
  p.add_hypograph("R1_exchange", LinearExpr{}.add(lhs1, 1.0), {term(l.t21, {Link::Exch21})});
  p.add_hypograph("R1_hap", LinearExpr{}.add(lhs1, 1.0),
                  {term(l.t21, {Link::Exch01}), term(l.t31, {Link::Joint1a, Link::Joint2a})});
  p.add_hypograph("R2_exchange", LinearExpr{}.add(lhs2, 1.0), {term(l.t22, {Link::Exch22})});
  p.add_hypograph("R2_hap", LinearExpr{}.add(lhs2, 1.0),
                  {term(l.t22, {Link::Exch02}), term(l.t32, {Link::Joint1b, Link::Joint2b})});

  if (obj.weighted) {
    p.objective.add(l.r1, obj.omega).add(l.r2, 1.0 - obj.omega);
  } else {
    p.objective.add(l.r_bar, 1.0);
  }
}

double beamforming_gain(const CVector& bar) { return std::pow(bar.cwiseAbs().sum(), 2); }

struct Schedule {
  std::array<double, 5> t{};
  std::array<double, 6> tau{};
};

// Rates of a schedule under given gains, after shrinking each device's
// energies to what it harvested.
double schedule_score(const PhaseGains& g, const Schedule& s, const SystemParams& params,
                      Objective obj) {
  const auto& [t1, t21, t22, t31, t32] = s.t;
  const auto& [tau21, tau22, tau31, tau31p, tau32, tau32p] = s.tau;
  const double harvest = params.eta * params.p_hap * t1;
  const double req1 = tau21 + tau31 + tau31p;
  const double req2 = tau22 + tau32 + tau32p;
  const double f1 = req1 > 0.0 ? std::min(1.0, harvest * g.e1 / req1) : 1.0;
  const double f2 = req2 > 0.0 ? std::min(1.0, harvest * g.e2 / req2) : 1.0;
  const double rho = params.rho();
  const double r1_2 = perspective_log2(t21, rho * g.x21 * tau21 * f1);
  const double r0_21 = perspective_log2(t21, rho * g.x01 * tau21 * f1);
  const double r1_3 = perspective_log2(t31, rho * (g.j1a * tau31 * f1 + g.j2a * tau32p * f2));
  const double r2_2 = perspective_log2(t22, rho * g.x22 * tau22 * f2);
  const double r0_22 = perspective_log2(t22, rho * g.x02 * tau22 * f2);
  const double r2_3 = perspective_log2(t32, rho * (g.j1b * tau31p * f1 + g.j2b * tau32 * f2));
  const UserRates u = user_rates(r1_2, r0_21, r1_3, r2_2, r0_22, r2_3);
  return obj.value(u.r1, u.r2);
}

}  // namespace

double energy_unit(const LiftedChannels& lifted, const SystemParams& params) {
  const double g = std::max(beamforming_gain(lifted.bar_1), beamforming_gain(lifted.bar_2));
  return params.eta * params.p_hap * (g > 0.0 ? g : 1.0);
}

P3Problem build_p3(const LiftedChannels& lifted, const SystemParams& params, Objective objective) {
  params.validate();
  const Eigen::Index d = lifted.dim();
  for (const CMatrix* m : {&lifted.psi_1, &lifted.psi_2, &lifted.psi_21, &lifted.psi_22}) {
    if (m->rows() != d || m->cols() != d) throw std::invalid_argument("build_p3: lifted size mismatch");
  }
  P3Problem out;
  out.objective = objective;
  out.energy_unit = energy_unit(lifted, params);
  ConeProblem& p = out.problem;
  P3Layout& l = out.layout;
  l = declare_scalars(p, objective, out.energy_unit);
  l.w1 = p.add_matrix("W1", d, l.t1);
  l.w2 = p.add_matrix("W2", d, l.tau21);
  l.w3 = p.add_matrix("W3", d, l.tau22);
  l.w41 = p.add_matrix("W41", d, l.tau31);
  l.w41p = p.add_matrix("W41'", d, l.tau31p);
  l.w42 = p.add_matrix("W42", d, l.tau32);
  l.w42p = p.add_matrix("W42'", d, l.tau32p);
  const GainFn gain = [&](LinearExpr& e, Link k, double w) {
    switch (k) {
      case Link::Energy1: e.add_trace(l.w1, lifted.psi_1, w); break;
      case Link::Energy2: e.add_trace(l.w1, lifted.psi_2, w); break;
      case Link::Exch21: e.add_trace(l.w2, lifted.psi_21, w); break;
      case Link::Exch01: e.add_trace(l.w2, lifted.psi_1, w); break;
      case Link::Exch22: e.add_trace(l.w3, lifted.psi_22, w); break;
      case Link::Exch02: e.add_trace(l.w3, lifted.psi_2, w); break;
      case Link::Joint1a: e.add_trace(l.w41, lifted.psi_1, w); break;
      case Link::Joint2a: e.add_trace(l.w42p, lifted.psi_2, w); break;
      case Link::Joint1b: e.add_trace(l.w41p, lifted.psi_1, w); break;
      case Link::Joint2b: e.add_trace(l.w42, lifted.psi_2, w); break;
    }
  };
  add_protocol_constraints(p, l, params, objective, gain);
  return out;
}

RelaxedSolution solve_relaxation(const P3Problem& p3, const SolverSettings& settings) {
  const SolveResult res = solve(p3.problem, settings);
  RelaxedSolution out;
  out.status = res.status;
  out.r_bar_star = res.upper_bound;
  out.achieved = res.objective;
  out.iterations = res.iterations;
  out.message = res.message;
  const Assignment& a = res.assignment;
  if (a.scalars.empty()) return out;
  const P3Layout& l = p3.layout;
  out.t = {a.scalars[l.t1], a.scalars[l.t21], a.scalars[l.t22], a.scalars[l.t31], a.scalars[l.t32]};
  out.tau = {a.scalars[l.tau21], a.scalars[l.tau22], a.scalars[l.tau31],
             a.scalars[l.tau31p], a.scalars[l.tau32], a.scalars[l.tau32p]};
  out.w = {a.matrices[l.w1], a.matrices[l.w2], a.matrices[l.w3], a.matrices[l.w41],
           a.matrices[l.w41p], a.matrices[l.w42], a.matrices[l.w42p]};
  if (p3.objective.weighted) {
    out.r1 = a.scalars[l.r1];
    out.r2 = a.scalars[l.r2];
  } else {
    out.r1 = out.r2 = a.scalars[l.r_bar];
  }
  return out;
}

CVector extract_phases(const CVector& v_bar) {
  if (v_bar.size() == 0) throw std::invalid_argument("extract_phases: empty vector");
  const Eigen::Index n = v_bar.size() - 1;
  const cplx last = v_bar[n];
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx z = std::abs(last) > 0.0 ? v_bar[i] * std::conj(last) : v_bar[i];
    const double m = std::abs(z);
    v[i] = m > 0.0 ? std::conj(z) / m : cplx(1.0, 0.0);
  }
  return v;
}

RecoveryResult recover_v(const CMatrix& v_star, const std::function<double(const CVector&)>& score,
                         int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("recover_v: trials must be >= 1");
  if (v_star.rows() != v_star.cols() || v_star.rows() < 1) {
    throw std::invalid_argument("recover_v: V must be a nonempty square matrix");
  }
  const Eigen::Index d = v_star.rows();
  RecoveryResult out;
  if (d == 1) {
    out.v = CVector(0);
    out.score = score(out.v);
    out.best_trial = 0;
    out.best_so_far.assign(trials, out.score);
    return out;
  }
  const CMatrix herm = 0.5 * (v_star + v_star.adjoint());
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm);
  const RVector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const CMatrix factor = eig.eigenvectors() * root.cast<cplx>().asDiagonal();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector r(d);
  out.score = -kInf;
  out.best_so_far.reserve(trials);
  for (int k = 0; k < trials; ++k) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      r[i] = cplx(re, im) * M_SQRT1_2;
    }
    CVector v = extract_phases(factor * r);
    const double s = score(v);
    if (s > out.score || out.best_trial < 0) {
      out.score = s;
      out.v = std::move(v);
      out.best_trial = k;
    }
    out.best_so_far.push_back(out.score);
  }
  return out;
}

PhaseGains phase_gains(const ChannelRealization& r, const PhaseConfig& phases) {
  phases.validate(r.n_elements());
  const CompositeChannels c = composite_gamma(r);
  PhaseGains g;
  g.e1 = reflect_gain(phases.v1, c.gamma_1, r.alpha_1);
  g.e2 = reflect_gain(phases.v1, c.gamma_2, r.alpha_2);
  g.x21 = reflect_gain(phases.v2, c.gamma_21, r.alpha_12);
  g.x01 = reflect_gain(phases.v2, c.gamma_1, r.alpha_1);
  g.x22 = reflect_gain(phases.v3, c.gamma_22, r.alpha_12);
  g.x02 = reflect_gain(phases.v3, c.gamma_2, r.alpha_2);
  g.j1a = g.j1b = reflect_gain(phases.v4, c.gamma_1, r.alpha_1);
  g.j2a = g.j2b = reflect_gain(phases.v4, c.gamma_2, r.alpha_2);
  return g;
}

RefitResult solve_allocation(const PhaseGains& g, const SystemParams& params,
                             const SolverSettings& settings, Objective objective) {
  params.validate();
  if (g.j1a != g.j1b || g.j2a != g.j2b) {
    throw std::invalid_argument("solve_allocation: joint-phase gains must agree across slots");
  }
  for (double x : {g.e1, g.e2, g.x21, g.x01, g.x22, g.x02, g.j1a, g.j2a}) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("solve_allocation: bad gain");
  }
  const double kappa = params.eta * params.p_hap *
                       (std::max(g.e1, g.e2) > 0.0 ? std::max(g.e1, g.e2) : 1.0);
  ConeProblem p;
  const P3Layout l = declare_scalars(p, objective, kappa);
  const GainFn gain = [&](LinearExpr& e, Link k, double w) {
    switch (k) {
      case Link::Energy1: e.add(l.t1, w * g.e1); break;
      case Link::Energy2: e.add(l.t1, w * g.e2); break;
      case Link::Exch21: e.add(l.tau21, w * g.x21); break;
      case Link::Exch01: e.add(l.tau21, w * g.x01); break;
      case Link::Exch22: e.add(l.tau22, w * g.x22); break;
      case Link::Exch02: e.add(l.tau22, w * g.x02); break;
      case Link::Joint1a: e.add(l.tau31, w * g.j1a); break;
      case Link::Joint2a: e.add(l.tau32p, w * g.j2a); break;
      case Link::Joint1b: e.add(l.tau31p, w * g.j1b); break;
      case Link::Joint2b: e.add(l.tau32, w * g.j2b); break;
    }
  };
  add_protocol_constraints(p, l, params, objective, gain);
  const SolveResult res = solve(p, settings);

  RefitResult out;
  out.status = res.status;
  out.objective = res.objective;
  out.upper_bound = res.upper_bound;
  out.message = res.message;
  if (res.assignment.scalars.empty()) return out;
  const auto& y = res.assignment.scalars;
  auto nonneg = [](double v) { return std::max(0.0, v); };
  const double t1 = nonneg(y[l.t1]), t21 = nonneg(y[l.t21]), t22 = nonneg(y[l.t22]);
  const double t31 = nonneg(y[l.t31]), t32 = nonneg(y[l.t32]);
  const double tau21 = nonneg(y[l.tau21]), tau22 = nonneg(y[l.tau22]);
  const double tau31 = nonneg(y[l.tau31]), tau31p = nonneg(y[l.tau31p]);
  const double tau32 = nonneg(y[l.tau32]), tau32p = nonneg(y[l.tau32p]);

  Allocation& a = out.alloc;
  a.t1 = t1;
  a.t21 = t21;
  a.t22 = t22;
  a.p21 = t21 > 0.0 ? tau21 / t21 : 0.0;
  a.p22 = t22 > 0.0 ? tau22 / t22 : 0.0;
  const double t3 = t31 + t32;
  a.t31 = t31;
  a.t32 = t32;
  if (t3 > 0.0) {
    // One power per device over the whole joint phase: the pooled SNR is the
    // time average of the two slot SNRs, so the total joint rate can only
    // grow, and the split below hands each user at least its old share.
    a.p31 = (tau31 + tau31p) / t3;
    a.p32 = (tau32 + tau32p) / t3;
    const double rho = params.rho();
    const double r31 = perspective_log2(t31, rho * (g.j1a * tau31 + g.j2a * tau32p));
    const double r32 = perspective_log2(t32, rho * (g.j1b * tau31p + g.j2b * tau32));
    if (r31 + r32 > 0.0) {
      a.t31 = t3 * r31 / (r31 + r32);
      a.t32 = t3 - a.t31;
    }
  }
  return out;
}

RefitReport refit_allocation(const ChannelRealization& r, const PhaseConfig& phases,
                             const SystemParams& params, const SolverSettings& settings,
                             Objective objective) {
  RefitReport out;
  out.refit = solve_allocation(phase_gains(r, phases), params, settings, objective);
  out.rates = evaluate_rates(r, phases, params, out.refit.alloc);
  return out;
}

namespace {

RecoveredSolution run_cooperation(const ChannelRealization& r, const SystemParams& params,
                                  Objective obj, const OptimizerSettings& settings) {
  settings.validate();
  params.validate();
  const LiftedChannels lifted = lift_channels(r);
  const P3Problem p3 = build_p3(lifted, params, obj);
  const RelaxedSolution rel = solve_relaxation(p3, settings.solver);

  RecoveredSolution out;
  out.scheme = r.n_elements() > 0 ? SchemeId::CoopWithIrs : SchemeId::CoopNoIrs;
  out.r_bar_star = rel.r_bar_star;
  out.iterations = rel.iterations;
  out.status = rel.status;
  out.message = rel.message;

  const Eigen::Index n = r.n_elements();
  PhaseConfig phases = PhaseConfig::all_ones(n);
  if (rel.status != SolveStatus::Infeasible && n > 0) {
    const double t_zero = 1e-9;
    const double tau_zero = 1e-9 * p3.energy_unit;
    const Schedule sched{rel.t, rel.tau};
    auto ratio = [](const CMatrix& w, const CMatrix& psi, double s) {
      return s > 0.0 ? (psi * w).trace().real() / s : 0.0;
    };
    const auto& [t1, t21, t22, t31, t32] = rel.t;
    const auto& [tau21, tau22, tau31, tau31p, tau32, tau32p] = rel.tau;
    (void)t21; (void)t22; (void)t31; (void)t32;
    PhaseGains relaxed;
    relaxed.e1 = ratio(rel.w[0], lifted.psi_1, t1);
    relaxed.e2 = ratio(rel.w[0], lifted.psi_2, t1);
    relaxed.x21 = ratio(rel.w[1], lifted.psi_21, tau21);
    relaxed.x01 = ratio(rel.w[1], lifted.psi_1, tau21);
    relaxed.x22 = ratio(rel.w[2], lifted.psi_22, tau22);
    relaxed.x02 = ratio(rel.w[2], lifted.psi_2, tau22);
    relaxed.j1a = ratio(rel.w[3], lifted.psi_1, tau31);
    relaxed.j1b = ratio(rel.w[4], lifted.psi_1, tau31p);
    relaxed.j2b = ratio(rel.w[5], lifted.psi_2, tau32);
    relaxed.j2a = ratio(rel.w[6], lifted.psi_2, tau32p);

    const CompositeChannels c = composite_gamma(r);
    auto recover = [&](const CMatrix& w, double s, auto&& patch) -> CVector {
      const CMatrix v_star = w / s;
      auto score = [&](const CVector& v) {
        PhaseGains g = relaxed;
        patch(g, v);
        return schedule_score(g, sched, params, obj);
      };
      return recover_v(v_star, score, settings.randomization_trials, settings.seed).v;
    };
    if (t1 > t_zero) {
      phases.v1 = recover(rel.w[0], t1, [&](PhaseGains& g, const CVector& v) {
        g.e1 = reflect_gain(v, c.gamma_1, r.alpha_1);
        g.e2 = reflect_gain(v, c.gamma_2, r.alpha_2);
      });
    }
    if (tau21 > tau_zero) {
      phases.v2 = recover(rel.w[1], tau21, [&](PhaseGains& g, const CVector& v) {
        g.x21 = reflect_gain(v, c.gamma_21, r.alpha_12);
        g.x01 = reflect_gain(v, c.gamma_1, r.alpha_1);
      });
    }
    if (tau22 > tau_zero) {
      phases.v3 = recover(rel.w[2], tau22, [&](PhaseGains& g, const CVector& v) {
        g.x22 = reflect_gain(v, c.gamma_22, r.alpha_12);
        g.x02 = reflect_gain(v, c.gamma_2, r.alpha_2);
      });
    }
    // Joint phase: normalize by tau31 when it is in use, otherwise by the
    // largest of the other three joint energies. Interior-point solutions
    // leave unused energies at tiny positive values, so "in use" is judged
    // against the joint phase's total energy.
    int pick = 3;
    double norm = tau31;
    const double joint_zero = std::max(tau_zero, 1e-6 * (tau31 + tau31p + tau32 + tau32p));
    if (!(tau31 > joint_zero)) {
      const std::array<std::pair<int, double>, 3> others{
          {{4, tau31p}, {5, tau32}, {6, tau32p}}};
      norm = 0.0;
      for (const auto& [idx, val] : others) {
        if (val > norm) {
          norm = val;
          pick = idx;
        }
      }
    }
    if (norm > tau_zero) {
      phases.v4 = recover(rel.w[pick], norm, [&](PhaseGains& g, const CVector& v) {
        g.j1a = g.j1b = reflect_gain(v, c.gamma_1, r.alpha_1);
        g.j2a = g.j2b = reflect_gain(v, c.gamma_2, r.alpha_2);
      });
    }
  }

  const RefitReport fit = refit_allocation(r, phases, params, settings.solver, obj);
  if (fit.refit.status != SolveStatus::Optimal && out.status == SolveStatus::Optimal) {
    out.status = fit.refit.status;
    out.message = "refit: " + fit.refit.message;
  }
  out.plan = CoopPlan{phases, fit.refit.alloc, fit.rates};
  out.r1 = fit.rates.r1;
  out.r2 = fit.rates.r2;
  out.min_rate = fit.rates.min_rate;
  out.objective = obj.value(out.r1, out.r2);
  out.gap = out.r_bar_star - out.objective;
  return out;
}

}  // namespace

RecoveredSolution maximize_common_throughput(const ChannelRealization& realization,
                                             const SystemParams& params,
                                             const OptimizerSettings& settings) {
  return run_cooperation(realization, params, Objective::min_rate(), settings);
}

RecoveredSolution maximize_weighted_sum(const ChannelRealization& realization,
                                        const SystemParams& params, double omega,
                                        const OptimizerSettings& settings) {
  return run_cooperation(realization, params, Objective::weighted_sum(omega), settings);
}

}  // namespace irscoop
