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

// Independent reference computations used by the unit and acceptance tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "irscoop/baselines.hpp"
#include "irscoop/sdr_optimizer.hpp"

namespace oracle {

using irscoop::cplx;
using irscoop::CMatrix;
using irscoop::CVector;

inline double rate(double t, double snr_energy) {
  if (t <= 0.0) return 0.0;
  return t * std::log2(1.0 + snr_energy / t);
}

// |sum_n v_n a_n b_n + c|^2 written out term by term.
inline double gain(const CVector& v, const CVector& a, const CVector& b, cplx c) {
  cplx s = c;
  for (Eigen::Index n = 0; n < v.size(); ++n) s += v[n] * a[n] * b[n];
  return std::norm(s);
}

// Same gain through the lifted quadratic form tr(Psi Vbar) with
// Psi = [a.*b; c][a.*b; c]^H and Vbar = [conj(v); 1][conj(v); 1]^H.
inline double trace_gain(const CVector& v, const CVector& a, const CVector& b, cplx c) {
  const Eigen::Index n = v.size();
  CVector h(n + 1), w(n + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    h[i] = a[i] * b[i];
    w[i] = std::conj(v[i]);
  }
  h[n] = c;
  w[n] = 1.0;
  const CMatrix psi = h * h.adjoint();
  const CMatrix vbar = w * w.adjoint();
  cplx tr = 0.0;
  for (Eigen::Index i = 0; i <= n; ++i) {
    for (Eigen::Index j = 0; j <= n; ++j) tr += psi(i, j) * vbar(j, i);
  }
  return tr.real();
}

struct CoopGains {
  double e1, e2, x21, x01, x22, x02, j1, j2;
};

// Best max-min rate of one device pair given times and energy fractions,
// with the joint slot split solved exactly: the two user rates are affine in
// the split, so the optimum is at an endpoint or at the crossing.
inline double best_split(double a1, double b1, double a2, double b2, double joint) {
  auto value = [&](double s) {
    return std::min(std::min(a1, b1 + s * joint), std::min(a2, b2 + (1.0 - s) * joint));
  };
  double best = std::max(value(0.0), value(1.0));
  if (joint > 0.0) {
    const double s = (b2 + joint - b1) / (2.0 * joint);
    if (s > 0.0 && s < 1.0) best = std::max(best, value(s));
  }
  return best;
}

// Grid search over (t1, t21, t22) on the simplex with t3 = 1 - t1 - t21 - t22,
// and over the share of each device's energy spent on the exchange phase.
inline double coop_grid(const CoopGains& g, double eta_p, double rho, double step) {
  const int k = static_cast<int>(std::lround(1.0 / step));
  double best = 0.0;
  for (int i1 = 0; i1 <= k; ++i1) {
    const double t1 = i1 * step;
    const double e1 = eta_p * t1 * g.e1;
    const double e2 = eta_p * t1 * g.e2;
    for (int i21 = 0; i1 + i21 <= k; ++i21) {
      const double t21 = i21 * step;
      for (int i22 = 0; i1 + i21 + i22 <= k; ++i22) {
        const double t22 = i22 * step;
        const double t3 = std::max(0.0, 1.0 - t1 - t21 - t22);
        for (int f1 = 0; f1 <= k; ++f1) {
          const double tau21 = e1 * f1 * step;
          const double a1 = rate(t21, rho * g.x21 * tau21);
          const double b1 = rate(t21, rho * g.x01 * tau21);
          for (int f2 = 0; f2 <= k; ++f2) {
            const double tau22 = e2 * f2 * step;
            const double a2 = rate(t22, rho * g.x22 * tau22);
            const double b2 = rate(t22, rho * g.x02 * tau22);
            const double joint_energy =
                g.j1 * e1 * (k - f1) * step + g.j2 * e2 * (k - f2) * step;
            const double joint = rate(t3, rho * joint_energy);
            best = std::max(best, best_split(a1, b1, a2, b2, joint));
          }
        }
      }
    }
  }
  return best;
}

// Harvest-then-transmit: all harvested energy is spent, grid over times.
inline double htt_grid(const irscoop::HttGains& g, double eta_p, double rho, double step) {
  const int k = static_cast<int>(std::lround(1.0 / step));
  double best = 0.0;
  for (int i0 = 0; i0 <= k; ++i0) {
    const double t0 = i0 * step;
    for (int i1 = 0; i0 + i1 <= k; ++i1) {
      const double t1 = i1 * step;
      const double t2 = std::max(0.0, 1.0 - t0 - t1);
      const double r1 = rate(t1, rho * g.d1 * eta_p * t0 * g.e1);
      const double r2 = rate(t2, rho * g.d2 * eta_p * t0 * g.e2);
      best = std::max(best, std::min(r1, r2));
    }
  }
  return best;
}

// Every phase vector on a uniform grid of `points` angles per element.
inline std::vector<CVector> phase_grid(Eigen::Index n, int points) {
  std::vector<CVector> out;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      v[i] = std::polar(1.0, 2.0 * M_PI * idx[static_cast<std::size_t>(i)] / points);
    }
    out.push_back(v);
    std::size_t pos = 0;
    while (pos < idx.size() && ++idx[pos] == points) idx[pos++] = 0;
    if (pos == idx.size()) break;
  }
  return out;
}

// Points not dominated in both coordinates.
inline std::vector<std::pair<double, double>> pareto(std::vector<std::pair<double, double>> pts) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second > b.second);
  });
  std::vector<std::pair<double, double>> front;
  double best_second = -1.0;
  for (const auto& p : pts) {
    if (p.second > best_second) {
      front.push_back(p);
      best_second = p.second;
    }
  }
  return front;
}

// Exhaustive search over grid phases for the cooperation scheme. The
// allocation optimum is nondecreasing in every gain, so each phase only
// contributes its Pareto front of gain pairs, and a partial assignment is
// bounded by giving the open phases their componentwise best gains.
struct BruteForce {
  double best = 0.0;
  long solves = 0;
  std::size_t front_sizes[4] = {0, 0, 0, 0};
};

inline BruteForce coop_brute_force(const irscoop::ChannelRealization& r,
                                   const irscoop::SystemParams& params, int points,
                                   const irscoop::SolverSettings& settings) {
  const Eigen::Index n = r.n_elements();
  const auto grid = phase_grid(n, points);
  const CVector& g = r.g;
  const CVector& a1 = r.alpha_1r;
  const CVector& a2 = r.alpha_2r;
  auto front = [&](const CVector& x1, const CVector& y1, cplx c1, const CVector& x2,
                   const CVector& y2, cplx c2) {
    std::vector<std::pair<double, double>> pts;
    for (const CVector& v : grid) pts.emplace_back(gain(v, x1, y1, c1), gain(v, x2, y2, c2));
    return pareto(pts);
  };
  // Phase fronts: energy (e1, e2), WD1 exchange (x21, x01), WD2 exchange
  // (x22, x02), joint (j1, j2).
  const std::vector<std::vector<std::pair<double, double>>> fronts{
      front(g, a1, r.alpha_1, g, a2, r.alpha_2),
      front(a2, a1, r.alpha_12, g, a1, r.alpha_1),
      front(a1, a2, r.alpha_12, g, a2, r.alpha_2),
      front(g, a1, r.alpha_1, g, a2, r.alpha_2)};
  std::vector<std::pair<double, double>> ideal;
  for (const auto& f : fronts) {
    double m1 = 0.0, m2 = 0.0;
    for (const auto& p : f) {
      m1 = std::max(m1, p.first);
      m2 = std::max(m2, p.second);
    }
    ideal.emplace_back(m1, m2);
  }
  BruteForce out;
  for (std::size_t i = 0; i < 4; ++i) out.front_sizes[i] = fronts[i].size();
  std::vector<std::pair<double, double>> chosen(4);
  auto value = [&](std::size_t assigned) {
    std::vector<std::pair<double, double>> p(4);
    for (std::size_t i = 0; i < 4; ++i) p[i] = i < assigned ? chosen[i] : ideal[i];
    irscoop::PhaseGains pg;
    pg.e1 = p[0].first;
    pg.e2 = p[0].second;
    pg.x21 = p[1].first;
    pg.x01 = p[1].second;
    pg.x22 = p[2].first;
    pg.x02 = p[2].second;
    pg.j1a = pg.j1b = p[3].first;
    pg.j2a = pg.j2b = p[3].second;
    ++out.solves;
    const auto res = irscoop::solve_allocation(pg, params, settings);
    return std::pair{res.objective, res.upper_bound};
  };
  // Best first: children are visited in decreasing bound order and the
  // rest are cut as soon as their bound cannot beat the incumbent.
  auto beaten = [&](double bound) { return bound <= out.best * (1.0 + 1e-7); };
  std::function<void(std::size_t)> search = [&](std::size_t level) {
    std::vector<std::pair<double, std::pair<double, double>>> children;
    for (const auto& cand : fronts[level]) {
      chosen[level] = cand;
      const auto [value_now, bound] = value(level + 1);
      if (level + 1 == 4) {
        out.best = std::max(out.best, value_now);
      } else if (!beaten(bound)) {
        children.emplace_back(bound, cand);
      }
    }
    std::sort(children.begin(), children.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [bound, cand] : children) {
      if (beaten(bound)) break;
      chosen[level] = cand;
      search(level + 1);
    }
  };
  search(0);
  return out;
}

}  // namespace oracle
