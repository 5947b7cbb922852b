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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
//
//   acceptance [--only k[,k...]] [--workers n] [--out dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "generators.hpp"
#include "oracles.hpp"
#include "irscoop/baselines.hpp"
#include "irscoop/harness.hpp"

using namespace irscoop;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Options {
  std::set<int> only;
  int workers = 0;
  fs::path out = "acceptance_results";
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

double lg(double x) { return std::log1p(x) / std::log(2.0); }

double trace_form(const CMatrix& psi, const CVector& v) {
  const CVector bar = lift_phase(v);
  return (psi * (bar * bar.adjoint())).trace().real();
}

Outcome lifting_equivalence() {
  gen::Source src(1001);
  const SystemParams p;
  double worst = 0.0;
  int bad = 0;
  for (int k = 0; k < 1000; ++k) {
    const int n = 1 + k % 8;
    const ChannelRealization r =
        k % 2 == 0 ? sample_realization(ScenarioGeometry{}, PathLossModel{}, n, src.word())
                   : src.realization(n);
    const PhaseConfig ph = src.phase_config(n);
    const LiftedChannels lc = lift_channels(r);
    const double g1 = trace_form(lc.psi_1, ph.v1), g2 = trace_form(lc.psi_2, ph.v1);
    const Allocation a = src.allocation(g1, g2, p);
    const RateReport m = evaluate_rates(r, ph, p, a);

    const double rho = p.rho(), harvest = p.eta * p.p_hap * a.t1;
    const double snr3 = rho * (a.p31 * trace_form(lc.psi_1, ph.v4) + a.p32 * trace_form(lc.psi_2, ph.v4));
    const double t[] = {
        harvest * g1,
        harvest * g2,
        a.t21 * lg(rho * a.p21 * trace_form(lc.psi_21, ph.v2)),
        a.t21 * lg(rho * a.p21 * trace_form(lc.psi_1, ph.v2)),
        a.t22 * lg(rho * a.p22 * trace_form(lc.psi_22, ph.v3)),
        a.t22 * lg(rho * a.p22 * trace_form(lc.psi_2, ph.v3)),
        a.t31 * lg(snr3),
        a.t32 * lg(snr3),
    };
    const double r1 = std::min(t[2], t[3] + t[6]);
    const double r2 = std::min(t[4], t[5] + t[7]);
    const double mod[] = {m.e1, m.e2, m.r1_2, m.r0_21, m.r2_2, m.r0_22, m.r1_3, m.r2_3, m.r1, m.r2};
    const double tr[] = {t[0], t[1], t[2], t[3], t[4], t[5], t[6], t[7], r1, r2};
    bool ok = true;
    for (int i = 0; i < 10; ++i) {
      const double rel = std::abs(mod[i] - tr[i]) / std::max({std::abs(mod[i]), std::abs(tr[i]), 1e-300});
      worst = std::max(worst, rel);
      ok = ok && close_rel(mod[i], tr[i], 1e-9);
    }
    bad += ok ? 0 : 1;
  }
  return {bad == 0, "1000 instances, " + std::to_string(bad) + " mismatches, worst relative error " +
                        fmt("%.2e", worst)};
}

Outcome relaxation_bound() {
  const SystemParams p;
  int bad_bound = 0, bad_slack = 0, bad_status = 0;
  double worst_excess = -kInf, worst_slack = kInf;
  for (int k = 0; k < 200; ++k) {
    const int n = 1 + k % 8;
    const ChannelRealization r =
        sample_realization(ScenarioGeometry{}, PathLossModel{}, n, realization_seed(2002, k));
    const SchemeId id = k % 4 == 3 ? SchemeId::IndepWithIrs : SchemeId::CoopWithIrs;
    const RecoveredSolution s = solve_scheme(id, r, p);
    if (s.status != SolveStatus::Optimal) ++bad_status;
    worst_excess = std::max(worst_excess, s.min_rate - s.r_bar_star);
    if (s.min_rate > s.r_bar_star + 1e-6) ++bad_bound;
    FeasibilityReport f;
    if (const auto* c = std::get_if<CoopPlan>(&s.plan)) {
      f = check_feasibility(r, c->phases, p, c->alloc);
    } else {
      const auto& h = std::get<HttPlan>(s.plan);
      f = check_htt_feasibility(r, h.phases, p, h.alloc);
    }
    worst_slack = std::min(worst_slack, f.worst_slack);
    if (f.worst_slack < -1e-6) ++bad_slack;
  }
  return {bad_bound == 0 && bad_slack == 0 && bad_status == 0,
          "200 instances, bound violations " + std::to_string(bad_bound) + ", slack violations " +
              std::to_string(bad_slack) + ", non-optimal " + std::to_string(bad_status) +
              ", max(min_rate - bound) " + fmt("%.2e", worst_excess) + ", worst slack " +
              fmt("%.2e", worst_slack)};
}

Outcome brute_force() {
  const SystemParams p;
  int bad = 0;
  double worst = kInf;
  long solves = 0;
  for (int k = 0; k < 50; ++k) {
    const int n = 1 + k % 2;
    const ChannelRealization r =
        sample_realization(ScenarioGeometry{}, PathLossModel{}, n, realization_seed(3003, k));
    const RecoveredSolution s = maximize_common_throughput(r, p);
    const oracle::BruteForce bf = oracle::coop_brute_force(r, p, 32, SolverSettings{});
    solves += bf.solves;
    const double ratio = bf.best > 0.0 ? s.min_rate / bf.best : 1.0;
    worst = std::min(worst, ratio);
    if (s.min_rate < 0.95 * bf.best) ++bad;
  }
  return {bad == 0, "50 instances, " + std::to_string(bad) + " below 0.95, worst ratio " +
                        fmt("%.4f", worst) + ", oracle solves " + std::to_string(solves)};
}

Outcome allocation_oracle() {
  gen::Source src(4004);
  const SystemParams p;
  int bad = 0;
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const ChannelRealization r = sample_realization(ScenarioGeometry{}, PathLossModel{},
                                                    src.integer(1, 4), realization_seed(4004, k));
    const PhaseConfig ph = src.phase_config(r.n_elements());
    const PhaseGains g = phase_gains(r, ph);
    const RefitResult fit = solve_allocation(g, p);
    const double engine = evaluate_rates(r, ph, p, fit.alloc).min_rate;
    const oracle::CoopGains og{g.e1, g.e2, g.x21, g.x01, g.x22, g.x02, g.j1a, g.j2a};
    const double grid = oracle::coop_grid(og, p.eta * p.p_hap, p.rho(), 0.02);
    worst = std::max(worst, std::abs(engine - grid));
    if (fit.status != SolveStatus::Optimal || std::abs(engine - grid) > 1e-2) ++bad;
  }
  return {bad == 0, "50 instances, " + std::to_string(bad) + " outside 1e-2, worst |engine - grid| " +
                        fmt("%.2e", worst)};
}

ExperimentConfig desk_config(const Options& o) {
  ExperimentConfig c;
  c.realizations = 100;
  c.workers = o.workers;
  c.output_dir = o.out;
  return c;
}

std::vector<ResultTable> kept;

void keep(const ResultTable& t) { kept.push_back(t); }

void write_kept(const Options& o) {
  if (kept.empty()) return;
  ExperimentConfig c = desk_config(o);
  c.experiments.clear();
  for (const ResultTable& t : kept) c.experiments.push_back(t.kind);
  try {
    for (const fs::path& f : emit_outputs(kept, c)) std::printf("wrote %s\n", f.c_str());
  } catch (const std::exception& e) {
    std::printf("could not write outputs: %s\n", e.what());
  }
}

Outcome scheme_ordering(const Options& o) {
  const ExperimentConfig c = desk_config(o);
  const ResultTable t = run_sweep_n(c);
  keep(t);
  const auto coop = mean_curve(t, "coop_irs"), indep = mean_curve(t, "indep_irs");
  const auto coop0 = mean_curve(t, "coop_no_irs"), indep0 = mean_curve(t, "indep_no_irs");
  bool ordered = coop.size() == c.n_list.size();
  std::string broken;
  for (std::size_t i = 0; ordered && i < coop.size(); ++i) {
    if (!(coop[i].second > indep[i].second && indep[i].second > coop0[i].second &&
          coop0[i].second > indep0[i].second)) {
      broken += " " + std::to_string(static_cast<int>(coop[i].first));
    }
  }
  ordered = ordered && broken.empty();
  std::ostringstream d;
  d << "ordering " << (ordered ? "holds at every N" : "violated at N =" + broken) << "; gains %";
  bool gains_ok = true;
  const std::pair<const char*, double> ref[] = {
      {"indep_irs", 30.17}, {"coop_no_irs", 102.23}, {"indep_no_irs", 275.11}};
  for (const auto& [other, target] : ref) {
    const SweepGain g = sweep_gain(t, "coop_irs", other);
    const bool ok = g.mean_of_ratios > 0.0 && g.mean_of_ratios >= target / 2.0 &&
                    g.mean_of_ratios <= target * 2.0;
    gains_ok = gains_ok && ok;
    d << " " << other << " " << fmt("%.2f", g.mean_of_ratios) << " (target " << target
      << ", averaged curves " << fmt("%.2f", g.ratio_of_means) << (ok ? ")" : ", out of range)");
  }
  d << "; failed rows " << t.failures();
  return {ordered && gains_ok && t.failures() == 0, d.str()};
}

bool unimodal(const std::vector<double>& y) {
  std::size_t i = 0;
  while (i + 1 < y.size() && y[i + 1] >= y[i]) ++i;
  while (i + 1 < y.size() && y[i + 1] <= y[i]) ++i;
  return i + 1 == y.size();
}

std::vector<double> values(const std::vector<std::pair<double, double>>& curve) {
  std::vector<double> y;
  for (const auto& [x, v] : curve) y.push_back(v);
  return y;
}

Outcome fig4_shape(const Options& o) {
  ExperimentConfig c = desk_config(o);
  c.d12_n_elements = 20;
  const ResultTable t = run_sweep_d12(c);
  keep(t);
  const auto coop = values(mean_curve(t, "coop_irs"));
  const auto indep = values(mean_curve(t, "indep_irs"));
  const auto base = values(mean_curve(t, "indep_no_irs"));
  const bool uni = unimodal(coop);
  const auto [lo, hi] = std::minmax_element(base.begin(), base.end());
  double mean = 0.0;
  for (double v : base) mean += v / static_cast<double>(base.size());
  const double spread = (*hi - *lo) / mean;
  int drops = 0;
  for (std::size_t i = 1; i < coop.size(); ++i) {
    if (coop[i] - indep[i] < coop[i - 1] - indep[i - 1]) ++drops;
  }
  std::ostringstream d;
  d << "coop_irs " << (uni ? "unimodal" : "not unimodal") << " [";
  for (std::size_t i = 0; i < coop.size(); ++i) d << (i ? " " : "") << fmt("%.4f", coop[i]);
  d << "], indep_no_irs spread " << fmt("%.1f", 100.0 * spread) << "% of mean, gap decreases "
    << drops << " time(s); failed rows " << t.failures();
  return {uni && spread <= 0.10 && drops <= 1 && t.failures() == 0, d.str()};
}

Outcome fig5_dominance(const Options& o) {
  const ExperimentConfig c = desk_config(o);
  const ResultTable t = run_rate_region(c);
  keep(t);
  const auto coop = region_points(t, "coop_irs");
  bool dominates = true;
  std::ostringstream d;
  for (SchemeId id : c.region_schemes) {
    if (id == SchemeId::CoopWithIrs) continue;
    const bool ok = region_dominates(coop, region_points(t, to_string(id)), c.omega_list, 0.0);
    dominates = dominates && ok;
    d << "over " << to_string(id) << " " << (ok ? "dominates" : "does not dominate") << ", ";
  }
  const bool hull = region_on_hull(coop, 1e-3);
  d << "hull audit " << (hull ? "passes" : "fails") << "; failed rows " << t.failures();
  return {dominates && hull && t.failures() == 0, d.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const Options& o) {
  ExperimentConfig c;
  c.realizations = 3;
  c.n_list = {10, 30};
  c.d12_list = {2.0, 3.5, 5.0};
  c.omega_list = {0.0, 0.3, 0.5, 0.7, 1.0};
  const fs::path root = fs::temp_directory_path() / "irscoop_acceptance_determinism";
  fs::remove_all(root);
  const unsigned hw = std::max(2u, std::thread::hardware_concurrency());
  const std::pair<const char*, int> runs[] = {{"a", 1}, {"b", 1}, {"c", static_cast<int>(hw)}, {"d", 3}};
  std::map<std::string, std::string> first;
  int mismatches = 0;
  for (const auto& [name, workers] : runs) {
    c.workers = workers;
    c.output_dir = root / name;
    std::vector<ResultTable> tables;
    for (ExperimentKind k : c.experiments) tables.push_back(run_experiment(c, k));
    emit_outputs(tables, c);
    for (ExperimentKind k : c.experiments) {
      const std::string text = slurp(c.output_dir / csv_name(k));
      auto [it, fresh] = first.emplace(csv_name(k), text);
      if (!fresh && it->second != text) ++mismatches;
    }
  }
  fs::remove_all(root);
  (void)o;
  return {mismatches == 0, "3 experiments x 4 runs (workers 1, 1, " + std::to_string(hw) +
                               ", 3), " + std::to_string(mismatches) + " CSV mismatches"};
}

Options parse(int argc, char** argv) {
  Options o;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string item;
      while (std::getline(ss, item, ',')) o.only.insert(std::stoi(item));
    } else if (a == "--workers" && i + 1 < argc) {
      o.workers = std::stoi(argv[++i]);
    } else if (a == "--out" && i + 1 < argc) {
      o.out = argv[++i];
    } else {
      std::fprintf(stderr, "usage: acceptance [--only k[,k...]] [--workers n] [--out dir]\n");
      std::exit(1);
    }
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const Options o = parse(argc, argv);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"lifting_equivalence", lifting_equivalence},
      {"relaxation_bound", relaxation_bound},
      {"brute_force_near_optimality", brute_force},
      {"allocation_oracle", allocation_oracle},
      {"scheme_ordering", [&] { return scheme_ordering(o); }},
      {"rate_vs_distance_shape", [&] { return fig4_shape(o); }},
      {"rate_region_dominance", [&] { return fig5_dominance(o); }},
      {"determinism", [&] { return determinism(o); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!o.only.empty() && !o.only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %d %s: %s [%.1f s]\n", out.passed ? "PASS" : "FAIL", id,
                criteria[i].first.c_str(), out.detail.c_str(), secs);
    std::fflush(stdout);
    failed += out.passed ? 0 : 1;
  }
  write_kept(o);
  return failed == 0 ? 0 : 1;
}
