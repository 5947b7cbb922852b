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
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "irscoop/baselines.hpp"
#include "irscoop/channel_model.hpp"
#include "irscoop/rate_model.hpp"
#include "irscoop/sdr_optimizer.hpp"

namespace irscoop {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { SweepN, SweepD12, RateRegion };

const char* to_string(ExperimentKind kind);
ExperimentKind experiment_from_string(const std::string& name);

struct ExperimentConfig {
  ScenarioGeometry geometry;
  PathLossModel path_loss;
  double p_hap_dbm = 30.0;
  double eta = 0.8;
  double n0_dbm = -80.0;

  std::vector<int> n_list{10, 20, 30, 40, 50};
  double d1 = 8.0;
  std::vector<double> d12_list{2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
  int d12_n_elements = 20;
  std::vector<double> omega_list;  // defaults to 0, 0.05, ..., 1
  int region_n_elements = 20;

  std::vector<SchemeId> schemes{SchemeId::CoopWithIrs, SchemeId::IndepWithIrs,
                                SchemeId::CoopNoIrs, SchemeId::IndepNoIrs};
  std::vector<SchemeId> region_schemes{SchemeId::CoopWithIrs, SchemeId::IndepWithIrs,
                                       SchemeId::IndepNoIrs};
  std::vector<ExperimentKind> experiments{ExperimentKind::SweepN, ExperimentKind::SweepD12,
                                          ExperimentKind::RateRegion};

  int realizations = 100;
  std::uint64_t seed = 20200701;
  int workers = 0;  // 0: hardware concurrency
  double failure_threshold = 0.05;
  bool record_timing = false;
  OptimizerSettings optimizer;
  std::filesystem::path output_dir = "results";

  ExperimentConfig();

  SystemParams params() const;
  /// Throws ConfigError.
  void validate() const;
};

/// Parses a YAML document; unknown keys are an error. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// YAML echo of every field, readable by parse_config.
std::string dump_config(const ExperimentConfig& config);

struct ResultRow {
  std::string scheme;
  std::string sweep_variable;
  double sweep_value = 0.0;
  int realization = 0;
  std::uint64_t seed = 0;
  std::string status;
  double min_rate = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double r_bar_star = 0.0;
  double gap = 0.0;
  std::optional<double> solve_time_s;

  bool ok() const { return status == "optimal"; }
};

struct ResultTable {
  ExperimentKind kind = ExperimentKind::SweepN;
  std::vector<ResultRow> rows;

  std::size_t failures() const;
};

/// Geometry used at one point of the inter-user sweep: WD2 on the HAP-WD1
/// line at distance d1 - d12 from the HAP, everything else unchanged.
ScenarioGeometry d12_geometry(const ExperimentConfig& config, double d12);

/// Seed shared by every scheme and sweep point for realization `index`.
std::uint64_t row_seed(const ExperimentConfig& config, int index);

ResultTable run_sweep_n(const ExperimentConfig& config);
ResultTable run_sweep_d12(const ExperimentConfig& config);
ResultTable run_rate_region(const ExperimentConfig& config);
ResultTable run_experiment(const ExperimentConfig& config, ExperimentKind kind);

struct Stats {
  double mean = 0.0;
  double std = 0.0;     // sample standard deviation
  double stderr_ = 0.0; // std / sqrt(count)
  std::size_t count = 0;
  std::size_t failures = 0;
};

Stats compute_stats(const std::vector<double>& values, std::size_t failures = 0);

struct GroupSummary {
  std::string scheme;
  double sweep_value = 0.0;
  Stats min_rate, r1, r2;
};

/// Per (scheme, sweep value) statistics over successful rows, ordered by
/// scheme then sweep value.
std::vector<GroupSummary> summarize(const ResultTable& table);

/// Mean min-rate of `scheme` at every sweep value, in ascending order.
std::vector<std::pair<double, double>> mean_curve(const ResultTable& table,
                                                  const std::string& scheme);

/// Percentage gain of `a` over `b` along a sweep under two conventions:
/// the average of pointwise gains, and the gain of the averaged curves.
struct SweepGain {
  double mean_of_ratios = 0.0;
  double ratio_of_means = 0.0;
};

SweepGain sweep_gain(const ResultTable& table, const std::string& a, const std::string& b);

/// Mean (R1, R2) of `scheme` at every omega, in ascending omega order.
std::vector<std::array<double, 3>> region_points(const ResultTable& table,
                                                 const std::string& scheme);

/// Support-function dominance: for every direction omega in the grid, the
/// best weighted sum over `a` is at least the best over `b` minus `tol`.
bool region_dominates(const std::vector<std::array<double, 3>>& a,
                      const std::vector<std::array<double, 3>>& b,
                      const std::vector<double>& omegas, double tol);

/// Hull audit: every point maximizes some nonnegative weighted sum over the
/// set, within relative tolerance `rel_tol`.
bool region_on_hull(const std::vector<std::array<double, 3>>& points, double rel_tol);

std::string csv_header();
std::string format_row(const ResultRow& row);
void write_csv(const ResultTable& table, const std::filesystem::path& path);
std::vector<ResultRow> read_csv(const std::filesystem::path& path);

std::string csv_name(ExperimentKind kind);

/// Writes one CSV per table, manifest.json and plot_figures.py into the
/// config output directory. Returns the written paths. Throws OutputError.
std::vector<std::filesystem::path> emit_outputs(const std::vector<ResultTable>& tables,
                                                const ExperimentConfig& config);

/// Failed rows / all rows over every table.
double failure_rate(const std::vector<ResultTable>& tables);

struct AuditLine {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Invariant audit on `count` random small instances: lifting equivalence,
/// relaxation bound, feasibility, unit modulus.
std::vector<AuditLine> run_validation(const ExperimentConfig& config, int count);

}  // namespace irscoop
