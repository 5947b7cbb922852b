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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "irscoop/harness.hpp"

namespace irscoop {

std::size_t ResultTable::failures() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const ResultRow& r) { return !r.ok(); }));
}

ScenarioGeometry d12_geometry(const ExperimentConfig& config, double d12) {
  return ScenarioGeometry::collinear(config.d1, config.d1 - d12, config.geometry.irs);
}

std::uint64_t row_seed(const ExperimentConfig& config, int index) {
  return realization_seed(config.seed, static_cast<std::uint64_t>(index));
}

namespace {

struct SweepPoint {
  double value = 0.0;
  ScenarioGeometry geometry;
  int n_elements = 0;
  Objective objective;
};

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body) {
  std::size_t threads = workers > 0 ? static_cast<std::size_t>(workers)
                                    : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

ResultTable run_points(const ExperimentConfig& config, ExperimentKind kind,
                       const std::string& variable, const std::vector<SweepPoint>& points,
                       const std::vector<SchemeId>& schemes) {
  config.validate();
  const SystemParams params = config.params();
  const std::size_t reps = static_cast<std::size_t>(config.realizations);
  const std::size_t per_task = schemes.size();
  ResultTable table;
  table.kind = kind;
  table.rows.resize(points.size() * reps * per_task);

  parallel_for(points.size() * reps, config.workers, [&](std::size_t task) {
    const SweepPoint& pt = points[task / reps];
    const int k = static_cast<int>(task % reps);
    const std::uint64_t seed = row_seed(config, k);
    OptimizerSettings os = config.optimizer;
    os.seed = realization_seed(config.optimizer.seed, seed);
    const ChannelRealization r =
        sample_realization(pt.geometry, config.path_loss, pt.n_elements, seed);
    for (std::size_t s = 0; s < per_task; ++s) {
      ResultRow& row = table.rows[task * per_task + s];
      row.scheme = to_string(schemes[s]);
      row.sweep_variable = variable;
      row.sweep_value = pt.value;
      row.realization = k;
      row.seed = seed;
      const auto start = std::chrono::steady_clock::now();
      try {
        const RecoveredSolution sol = solve_scheme(schemes[s], r, params, os, pt.objective);
        row.status = to_string(sol.status);
        row.min_rate = sol.min_rate;
        row.r1 = sol.r1;
        row.r2 = sol.r2;
        row.r_bar_star = sol.r_bar_star;
        row.gap = sol.gap;
      } catch (const std::exception&) {
        row.status = "error";
      }
      if (config.record_timing) {
        row.solve_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      }
    }
  });
  return table;
}

}  // namespace

ResultTable run_sweep_n(const ExperimentConfig& config) {
  std::vector<SweepPoint> points;
  for (int n : config.n_list) points.push_back({static_cast<double>(n), config.geometry, n, {}});
  return run_points(config, ExperimentKind::SweepN, "n_elements", points, config.schemes);
}

ResultTable run_sweep_d12(const ExperimentConfig& config) {
  std::vector<SweepPoint> points;
  for (double d12 : config.d12_list) {
    points.push_back({d12, d12_geometry(config, d12), config.d12_n_elements, {}});
  }
  return run_points(config, ExperimentKind::SweepD12, "d12", points, config.schemes);
}

ResultTable run_rate_region(const ExperimentConfig& config) {
  std::vector<SweepPoint> points;
  for (double w : config.omega_list) {
    points.push_back({w, config.geometry, config.region_n_elements, Objective::weighted_sum(w)});
  }
  return run_points(config, ExperimentKind::RateRegion, "omega", points, config.region_schemes);
}

ResultTable run_experiment(const ExperimentConfig& config, ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::SweepN: return run_sweep_n(config);
    case ExperimentKind::SweepD12: return run_sweep_d12(config);
    case ExperimentKind::RateRegion: return run_rate_region(config);
  }
  throw ConfigError("unknown experiment");
}

Stats compute_stats(const std::vector<double>& values, std::size_t failures) {
  Stats s;
  s.count = values.size();
  s.failures = failures;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.count - 1));
    s.stderr_ = s.std / std::sqrt(static_cast<double>(s.count));
  }
  return s;
}

std::vector<GroupSummary> summarize(const ResultTable& table) {
  struct Acc {
    std::vector<double> m, r1, r2;
    std::size_t failures = 0;
  };
  std::vector<std::string> order;
  std::map<std::pair<std::string, double>, Acc> groups;
  for (const ResultRow& row : table.rows) {
    if (std::find(order.begin(), order.end(), row.scheme) == order.end()) order.push_back(row.scheme);
    Acc& a = groups[{row.scheme, row.sweep_value}];
    if (!row.ok()) {
      ++a.failures;
      continue;
    }
    a.m.push_back(row.min_rate);
    a.r1.push_back(row.r1);
    a.r2.push_back(row.r2);
  }
  std::vector<GroupSummary> out;
  for (const std::string& scheme : order) {
    for (const auto& [key, a] : groups) {
      if (key.first != scheme) continue;
      out.push_back({scheme, key.second, compute_stats(a.m, a.failures),
                     compute_stats(a.r1, a.failures), compute_stats(a.r2, a.failures)});
    }
  }
  return out;
}

std::vector<std::pair<double, double>> mean_curve(const ResultTable& table,
                                                  const std::string& scheme) {
  std::vector<std::pair<double, double>> out;
  for (const GroupSummary& g : summarize(table)) {
    if (g.scheme == scheme) out.emplace_back(g.sweep_value, g.min_rate.mean);
  }
  return out;
}

SweepGain sweep_gain(const ResultTable& table, const std::string& a, const std::string& b) {
  const auto ca = mean_curve(table, a);
  const auto cb = mean_curve(table, b);
  SweepGain g;
  if (ca.empty() || ca.size() != cb.size()) return g;
  double sum_ratio = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    sum_ratio += ca[i].second / cb[i].second - 1.0;
    sum_a += ca[i].second;
    sum_b += cb[i].second;
  }
  g.mean_of_ratios = 100.0 * sum_ratio / static_cast<double>(ca.size());
  g.ratio_of_means = 100.0 * (sum_a / sum_b - 1.0);
  return g;
}

std::vector<std::array<double, 3>> region_points(const ResultTable& table,
                                                 const std::string& scheme) {
  std::vector<std::array<double, 3>> out;
  for (const GroupSummary& g : summarize(table)) {
    if (g.scheme == scheme) out.push_back({g.sweep_value, g.r1.mean, g.r2.mean});
  }
  return out;
}

namespace {

double support(const std::vector<std::array<double, 3>>& pts, double w) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : pts) best = std::max(best, w * p[1] + (1.0 - w) * p[2]);
  return best;
}

}  // namespace

bool region_dominates(const std::vector<std::array<double, 3>>& a,
                      const std::vector<std::array<double, 3>>& b,
                      const std::vector<double>& omegas, double tol) {
  if (a.empty() || b.empty()) return false;
  for (double w : omegas) {
    if (support(a, w) < support(b, w) - tol) return false;
  }
  return true;
}

bool region_on_hull(const std::vector<std::array<double, 3>>& points, double rel_tol) {
  double scale = 0.0;
  for (const auto& p : points) scale = std::max({scale, std::abs(p[1]), std::abs(p[2])});
  const double tol = rel_tol * std::max(scale, 1e-300);
  constexpr int kDirections = 4000;
  for (const auto& p : points) {
    bool exposed = false;
    for (int i = 0; i <= kDirections && !exposed; ++i) {
      const double w = static_cast<double>(i) / kDirections;
      exposed = w * p[1] + (1.0 - w) * p[2] >= support(points, w) - tol;
    }
    if (!exposed) return false;
  }
  return true;
}

double failure_rate(const std::vector<ResultTable>& tables) {
  std::size_t total = 0, failed = 0;
  for (const ResultTable& t : tables) {
    total += t.rows.size();
    failed += t.failures();
  }
  return total > 0 ? static_cast<double>(failed) / static_cast<double>(total) : 0.0;
}

std::vector<AuditLine> run_validation(const ExperimentConfig& config, int count) {
  config.validate();
  if (count < 1) throw ConfigError("validate: instance count must be >= 1");
  const SystemParams params = config.params();
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  double lift_err = 0.0, bound_excess = -kInf, worst_slack = kInf, modulus_err = 0.0,
         htt_slack = kInf;
  int failures = 0;
  for (int k = 0; k < count; ++k) {
    const int n = 1 + k % 8;
    const std::uint64_t seed = row_seed(config, k);
    const ChannelRealization r = sample_realization(config.geometry, config.path_loss, n, seed);
    const CompositeChannels c = composite_gamma(r);
    CVector v(n);
    for (int i = 0; i < n; ++i) v[i] = std::polar(1.0, angle(rng));
    const CVector bar = lift_phase(v);
    for (const auto& [gamma, alpha] :
         {std::pair{c.gamma_1, r.alpha_1}, std::pair{c.gamma_2, r.alpha_2},
          std::pair{c.gamma_21, r.alpha_12}}) {
      const double direct = reflect_gain(v, gamma, alpha);
      const double lifted = (lift_psi(gamma, alpha) * bar * bar.adjoint()).trace().real();
      lift_err = std::max(lift_err, std::abs(direct - lifted) / std::max(direct, 1e-300));
    }
    OptimizerSettings os = config.optimizer;
    os.seed = realization_seed(config.optimizer.seed, seed);
    const RecoveredSolution sol = maximize_common_throughput(r, params, os);
    if (sol.status != SolveStatus::Optimal) ++failures;
    bound_excess = std::max(bound_excess, sol.min_rate - sol.r_bar_star);
    const auto& plan = std::get<CoopPlan>(sol.plan);
    worst_slack = std::min(worst_slack,
                           check_feasibility(r, plan.phases, params, plan.alloc).worst_slack);
    for (const CVector* p : {&plan.phases.v1, &plan.phases.v2, &plan.phases.v3, &plan.phases.v4}) {
      for (Eigen::Index i = 0; i < p->size(); ++i) {
        modulus_err = std::max(modulus_err, std::abs(std::abs((*p)[i]) - 1.0));
      }
    }
    const RecoveredSolution ind = maximize_independent(r, params, os);
    const auto& hp = std::get<HttPlan>(ind.plan);
    htt_slack = std::min(htt_slack,
                         check_htt_feasibility(r, hp.phases, params, hp.alloc).worst_slack);
  }
  auto fmt = [](const char* label, double x) {
    std::ostringstream ss;
    ss.precision(3);
    ss << label << " " << std::scientific << x;
    return ss.str();
  };
  return {
      {"lifting_equivalence", lift_err <= 1e-9, fmt("max relative error", lift_err)},
      {"relaxation_bound", bound_excess <= 1e-6, fmt("max excess over bound", bound_excess)},
      {"cooperation_feasibility", worst_slack >= -1e-6, fmt("worst slack", worst_slack)},
      {"unit_modulus", modulus_err <= 1e-9, fmt("max modulus error", modulus_err)},
      {"independent_feasibility", htt_slack >= -1e-6, fmt("worst slack", htt_slack)},
      {"solver_status", failures == 0, "non-optimal solves " + std::to_string(failures)},
  };
}

}  // namespace irscoop
