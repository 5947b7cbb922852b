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

#include "barrier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace irscoop::detail {

PerspectiveDerivatives perspective_derivatives(double t, double u) {
  const double s = t + u;
  PerspectiveDerivatives d{};
  d.f = t * std::log1p(u / t) / kLn2;
  d.ft = (std::log1p(u / t) - u / s) / kLn2;
  d.fu = t / s / kLn2;
  d.ftt = -u * u / (t * s * s) / kLn2;
  d.ftu = u / (s * s) / kLn2;
  d.fuu = -t / (s * s) / kLn2;
  return d;
}

namespace {

constexpr double kUnbounded = 1e12;
constexpr double kBox = 1e6;

class Barrier {
 public:
  explicit Barrier(const BarrierProblem& p) : p_(p) {}

  int count() const {
    int m = static_cast<int>(p_.rows.size() + p_.concave.size());
    for (double l : p_.lower) m += std::isfinite(l) ? 1 : 0;
    return m;
  }

  // Returns false outside the barrier domain.
  bool value(const RVector& y, double kappa, double& phi) const {
    phi = -kappa * p_.c.dot(y);
    for (const LinearRow& r : p_.rows) {
      const double s = r.b - r.a.dot(y);
      if (!(s > 0.0)) return false;
      phi -= std::log(s);
    }
    for (int j = 0; j < p_.n; ++j) {
      if (!std::isfinite(p_.lower[j])) continue;
      const double s = y[j] - p_.lower[j];
      if (!(s > 0.0)) return false;
      phi -= std::log(s);
    }
    for (const ConcaveRow& row : p_.concave) {
      double g = 0.0;
      if (!row_value(row, y, g) || !(g > 0.0)) return false;
      phi -= std::log(g);
    }
    return std::isfinite(phi);
  }

  bool derivatives(const RVector& y, double kappa, double& phi, RVector& grad,
                   RMatrix& hess) const {
    const int n = p_.n;
    phi = -kappa * p_.c.dot(y);
    grad = -kappa * p_.c;
    hess = RMatrix::Zero(n, n);
    for (const LinearRow& r : p_.rows) {
      const double s = r.b - r.a.dot(y);
      if (!(s > 0.0)) return false;
      phi -= std::log(s);
      grad += r.a / s;
      hess.noalias() += (r.a / s) * (r.a / s).transpose();
    }
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(p_.lower[j])) continue;
      const double s = y[j] - p_.lower[j];
      if (!(s > 0.0)) return false;
      phi -= std::log(s);
      grad[j] -= 1.0 / s;
      hess(j, j) += 1.0 / (s * s);
    }
    RVector gg(n);
    RMatrix hg(n, n);
    for (const ConcaveRow& row : p_.concave) {
      double g = row.lin0 + row.lin.dot(y);
      gg = row.lin;
      hg.setZero();
      for (const ConcaveTerm& term : row.terms) {
        const double t = term.t_var >= 0 ? y[term.t_var] : term.t_const;
        if (term.t_var < 0 && t == 0.0) continue;
        const double u = term.u0 + term.u.dot(y);
        if (!(t > 0.0) || !(t + u > 0.0)) return false;
        const PerspectiveDerivatives d = perspective_derivatives(t, u);
        const double w = term.weight;
        g += w * d.f;
        gg += (w * d.fu) * term.u;
        hg.noalias() += (w * d.fuu) * term.u * term.u.transpose();
        if (term.t_var >= 0) {
          const int k = term.t_var;
          gg[k] += w * d.ft;
          hg(k, k) += w * d.ftt;
          hg.col(k) += (w * d.ftu) * term.u;
          hg.row(k) += (w * d.ftu) * term.u.transpose();
        }
      }
      if (!(g > 0.0)) return false;
      phi -= std::log(g);
      grad -= gg / g;
      hess.noalias() += (gg / g) * (gg / g).transpose();
      hess.noalias() -= hg / g;
    }
    return std::isfinite(phi);
  }

  bool row_value(const ConcaveRow& row, const RVector& y, double& g) const {
    g = row.lin0 + row.lin.dot(y);
    for (const ConcaveTerm& term : row.terms) {
      const double t = term.t_var >= 0 ? y[term.t_var] : term.t_const;
      if (term.t_var < 0 && t == 0.0) continue;
      const double u = term.u0 + term.u.dot(y);
      if (!(t > 0.0) || !(t + u > 0.0)) return false;
      g += term.weight * perspective_log2(t, u);
    }
    return std::isfinite(g);
  }

 private:
  const BarrierProblem& p_;
};

struct PathResult {
  bool ok = true;
  bool stopped = false;
  bool unbounded = false;
  double kappa = 0.0;
  int steps = 0;
};

// Follows the central path from a strictly feasible y until m / kappa drops
// below gap_target or `stop` fires.
PathResult follow_path(const BarrierProblem& p, RVector& y, double gap_target, int max_newton,
                       const std::function<bool(const RVector&)>& stop) {
  Barrier bar(p);
  const int m = std::max(1, bar.count());
  PathResult res;
  double kappa = 1.0;
  RVector grad;
  RMatrix hess;
  for (;;) {
    for (int inner = 0; inner < 200; ++inner) {
      double phi = 0.0;
      if (!bar.derivatives(y, kappa, phi, grad, hess)) {
        res.ok = false;
        return res;
      }
      const double reg = 1e-13 * std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
      hess.diagonal().array() += reg;
      Eigen::LDLT<RMatrix> ldlt(hess);
      const RVector dy = -ldlt.solve(grad);
      const double dec = -grad.dot(dy);
      if (!std::isfinite(dec)) {
        res.ok = false;
        return res;
      }
      if (dec < 1e-11) break;
      double alpha = 1.0;
      double phi_new = 0.0;
      RVector trial;
      bool moved = false;
      while (alpha > 1e-16) {
        trial = y + alpha * dy;
        if (bar.value(trial, kappa, phi_new) && phi_new <= phi - 0.25 * alpha * dec) {
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      ++res.steps;
      if (!moved) break;
      y = trial;
      if (stop && stop(y)) {
        res.stopped = true;
        res.kappa = kappa;
        return res;
      }
      if (p.c.dot(y) > kUnbounded) {
        res.unbounded = true;
        return res;
      }
      if (res.steps >= max_newton) {
        res.ok = false;
        res.kappa = kappa;
        return res;
      }
      if (dec < 1e-9) break;
    }
    res.kappa = kappa;
    if (m / kappa < gap_target) return res;
    kappa *= 10.0;
  }
}

BarrierProblem with_slack_variable(const BarrierProblem& p) {
  BarrierProblem q;
  q.n = p.n + 1;
  q.c = RVector::Zero(q.n);
  q.c[p.n] = -1.0;
  for (const LinearRow& r : p.rows) {
    LinearRow e;
    e.a = RVector::Zero(q.n);
    e.a.head(p.n) = r.a;
    e.a[p.n] = -1.0;
    e.b = r.b;
    q.rows.push_back(std::move(e));
  }
  for (const ConcaveRow& row : p.concave) {
    ConcaveRow e;
    e.lin = RVector::Zero(q.n);
    e.lin.head(p.n) = row.lin;
    e.lin[p.n] = 1.0;
    e.lin0 = row.lin0;
    for (const ConcaveTerm& term : row.terms) {
      ConcaveTerm t = term;
      t.u = RVector::Zero(q.n);
      t.u.head(p.n) = term.u;
      e.terms.push_back(std::move(t));
    }
    q.concave.push_back(std::move(e));
  }
  q.lower = p.lower;
  q.lower.push_back(-1.0);
  return q;
}

// Finds a strictly feasible point. Returns the minimal slack violation sigma
// reached (negative means strictly feasible with that margin).
double phase_one(const BarrierProblem& p, RVector& y, double margin, double gap_target,
                 int max_newton, bool& ok) {
  ok = true;
  RVector z = RVector::Zero(p.n + 1);
  for (int j = 0; j < p.n; ++j) {
    z[j] = std::isfinite(p.lower[j]) ? p.lower[j] + 1.0 : 0.0;
  }
  Barrier probe(p);
  double worst = 0.0;
  const RVector y0 = z.head(p.n);
  for (const LinearRow& r : p.rows) worst = std::max(worst, r.a.dot(y0) - r.b);
  for (const ConcaveRow& row : p.concave) {
    double g = 0.0;
    if (!probe.row_value(row, y0, g)) {
      ok = false;
      return std::numeric_limits<double>::infinity();
    }
    worst = std::max(worst, -g);
  }
  z[p.n] = worst + 1.0;
  const BarrierProblem q = with_slack_variable(p);
  const PathResult path = follow_path(q, z, gap_target, max_newton,
                                      [&](const RVector& v) { return v[p.n] < -margin; });
  if (!path.ok && !path.stopped) ok = false;
  y = z.head(p.n);
  return z[p.n];
}

}  // namespace

BarrierResult barrier_solve(const BarrierProblem& input, const BarrierSettings& settings) {
  BarrierResult out;
  BarrierProblem p = input;
  p.rows.clear();
  for (const LinearRow& r : input.rows) {
    const double norm = r.a.norm();
    if (norm == 0.0) {
      if (r.b < -settings.feasibility_tol) {
        out.status = BarrierStatus::Infeasible;
        return out;
      }
      continue;
    }
    p.rows.push_back({r.a / norm, r.b / norm});
  }
  // Box far outside the scaled region keeps the barrier bounded below along
  // directions that leave the objective unchanged.
  for (int j = 0; j < p.n; ++j) {
    const double base = std::isfinite(p.lower[j]) ? p.lower[j] : 0.0;
    RVector e = RVector::Zero(p.n);
    e[j] = 1.0;
    p.rows.push_back({e, base + kBox});
    if (!std::isfinite(p.lower[j])) p.rows.push_back({-e, kBox});
  }

  if (p.n == 0) {
    // Nothing to optimize: only check the constant constraints.
    const RVector empty(0);
    Barrier probe(p);
    bool feasible = true;
    for (const LinearRow& r : p.rows) feasible = feasible && r.b >= -settings.feasibility_tol;
    for (const ConcaveRow& row : p.concave) {
      double g = 0.0;
      feasible = feasible && probe.row_value(row, empty, g) && g >= -settings.feasibility_tol;
    }
    out.y = empty;
    out.status = feasible ? BarrierStatus::Optimal : BarrierStatus::Infeasible;
    return out;
  }

  RVector y;
  bool ok = true;
  double sigma = phase_one(p, y, 1e-3, 0.01 * settings.feasibility_tol, settings.max_newton, ok);
  if (!ok) {
    out.status = BarrierStatus::NumericalLimit;
    return out;
  }
  if (sigma >= -1e-3) {
    if (sigma > settings.feasibility_tol) {
      out.status = BarrierStatus::Infeasible;
      out.y = y;
      return out;
    }
    // Feasible set without interior: loosen every row slightly.
    const double eps = 0.1 * settings.feasibility_tol;
    for (LinearRow& r : p.rows) r.b += eps;
    for (ConcaveRow& row : p.concave) row.lin0 += eps;
    out.relaxed = true;
    sigma = phase_one(p, y, 0.5 * eps, 1e-3 * eps, settings.max_newton, ok);
    if (!ok || sigma >= -0.5 * eps) {
      out.status = BarrierStatus::NumericalLimit;
      out.y = y;
      return out;
    }
  }

  const PathResult path = follow_path(p, y, settings.gap_tol, settings.max_newton, nullptr);
  out.y = y;
  out.objective = p.c.dot(y);
  out.newton_steps = path.steps;
  for (int j = 0; j < p.n; ++j) {
    const double base = std::isfinite(p.lower[j]) ? p.lower[j] : 0.0;
    if (std::abs(y[j] - base) > 0.5 * kBox) out.status = BarrierStatus::Unbounded;
  }
  if (path.unbounded || out.status == BarrierStatus::Unbounded) {
    out.status = BarrierStatus::Unbounded;
    return out;
  }
  const int m = std::max(1, Barrier(p).count());
  out.upper_bound = out.objective + 1.01 * m / path.kappa;
  out.status = path.ok ? BarrierStatus::Optimal : BarrierStatus::NumericalLimit;
  return out;
}

}  // namespace irscoop::detail
