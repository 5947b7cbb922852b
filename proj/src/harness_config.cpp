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

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "irscoop/harness.hpp"

namespace irscoop {

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::SweepN: return "sweep_n";
    case ExperimentKind::SweepD12: return "sweep_d12";
    case ExperimentKind::RateRegion: return "rate_region";
  }
  return "unknown";
}

ExperimentKind experiment_from_string(const std::string& name) {
  for (ExperimentKind k :
       {ExperimentKind::SweepN, ExperimentKind::SweepD12, ExperimentKind::RateRegion}) {
    if (name == to_string(k)) return k;
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

ExperimentConfig::ExperimentConfig() {
  for (int i = 0; i <= 20; ++i) omega_list.push_back(i / 20.0);
}

SystemParams ExperimentConfig::params() const {
  return SystemParams::from_dbm(p_hap_dbm, eta, n0_dbm);
}

void ExperimentConfig::validate() const {
  try {
    geometry.validate();
    path_loss.validate();
    params().validate();
    optimizer.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (realizations < 1) throw ConfigError("realizations must be >= 1");
  if (workers < 0) throw ConfigError("workers must be >= 0");
  if (!(failure_threshold >= 0.0 && failure_threshold <= 1.0)) {
    throw ConfigError("failure_threshold must lie in [0, 1]");
  }
  if (n_list.empty() || d12_list.empty() || omega_list.empty()) {
    throw ConfigError("sweep lists must be nonempty");
  }
  for (int n : n_list) {
    if (n < 0) throw ConfigError("sweep_n.n_list: element counts must be >= 0");
  }
  if (d12_n_elements < 0 || region_n_elements < 0) throw ConfigError("n_elements must be >= 0");
  if (!(d1 > 0.0)) throw ConfigError("sweep_d12.d1 must be positive");
  for (double d12 : d12_list) {
    if (!(d12 > 0.0 && d12 < d1)) throw ConfigError("sweep_d12.d12_list: values must lie in (0, d1)");
  }
  for (double w : omega_list) {
    if (!(w >= 0.0 && w <= 1.0)) throw ConfigError("rate_region.omega_list: values must lie in [0, 1]");
  }
  if (schemes.empty() || region_schemes.empty()) throw ConfigError("scheme lists must be nonempty");
  if (experiments.empty()) throw ConfigError("experiments must be nonempty");
  if (output_dir.empty()) throw ConfigError("output_dir must be nonempty");
}

namespace {

void check_keys(const YAML::Node& node, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) throw ConfigError(where + ": expected a mapping");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
void read(const YAML::Node& node, const char* key, T& out, const std::string& where) {
  if (!node[key]) return;
  try {
    out = node[key].as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where + "." + key + ": bad value");
  }
}

void read_point(const YAML::Node& node, const char* key, Point2& p, const std::string& where) {
  std::vector<double> xy{p.x, p.y};
  read(node, key, xy, where);
  if (xy.size() != 2) throw ConfigError(where + "." + key + ": expected [x, y]");
  p = {xy[0], xy[1]};
}

std::vector<SchemeId> read_schemes(const YAML::Node& node, const char* key,
                                   std::vector<SchemeId> current, const std::string& where) {
  if (!node[key]) return current;
  std::vector<std::string> names;
  read(node, key, names, where);
  std::vector<SchemeId> out;
  for (const auto& n : names) {
    try {
      out.push_back(scheme_from_string(n));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + "." + key + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("yaml: ") + e.what());
  }
  if (root.IsNull()) {
    c.validate();
    return c;
  }
  check_keys(root, "config",
             {"output_dir", "seed", "realizations", "workers", "failure_threshold",
              "record_timing", "experiments", "schemes", "geometry", "path_loss", "system",
              "solver", "sweep_n", "sweep_d12", "rate_region"});
  std::string out_dir = c.output_dir.string();
  read(root, "output_dir", out_dir, "config");
  c.output_dir = out_dir;
  read(root, "seed", c.seed, "config");
  read(root, "realizations", c.realizations, "config");
  read(root, "workers", c.workers, "config");
  read(root, "failure_threshold", c.failure_threshold, "config");
  read(root, "record_timing", c.record_timing, "config");
  if (root["experiments"]) {
    std::vector<std::string> names;
    read(root, "experiments", names, "config");
    c.experiments.clear();
    for (const auto& n : names) c.experiments.push_back(experiment_from_string(n));
  }
  c.schemes = read_schemes(root, "schemes", c.schemes, "config");

  if (const YAML::Node g = root["geometry"]) {
    check_keys(g, "geometry", {"hap", "wd1", "wd2", "irs"});
    read_point(g, "hap", c.geometry.hap, "geometry");
    read_point(g, "wd1", c.geometry.wd1, "geometry");
    read_point(g, "wd2", c.geometry.wd2, "geometry");
    read_point(g, "irs", c.geometry.irs, "geometry");
  }
  if (const YAML::Node p = root["path_loss"]) {
    check_keys(p, "path_loss",
               {"c0_db", "d0", "exp_hap_irs", "exp_irs_wd", "exp_hap_wd", "exp_wd_wd"});
    read(p, "c0_db", c.path_loss.c0_db, "path_loss");
    read(p, "d0", c.path_loss.d0, "path_loss");
    read(p, "exp_hap_irs", c.path_loss.exp_hap_irs, "path_loss");
    read(p, "exp_irs_wd", c.path_loss.exp_irs_wd, "path_loss");
    read(p, "exp_hap_wd", c.path_loss.exp_hap_wd, "path_loss");
    read(p, "exp_wd_wd", c.path_loss.exp_wd_wd, "path_loss");
  }
  if (const YAML::Node s = root["system"]) {
    check_keys(s, "system", {"p_hap_dbm", "eta", "n0_dbm"});
    read(s, "p_hap_dbm", c.p_hap_dbm, "system");
    read(s, "eta", c.eta, "system");
    read(s, "n0_dbm", c.n0_dbm, "system");
  }
  if (const YAML::Node s = root["solver"]) {
    check_keys(s, "solver",
               {"feasibility_tol", "objective_tol", "bound_gap_tol", "max_iterations",
                "randomization_trials", "randomization_seed"});
    read(s, "feasibility_tol", c.optimizer.solver.feasibility_tol, "solver");
    read(s, "objective_tol", c.optimizer.solver.objective_tol, "solver");
    read(s, "bound_gap_tol", c.optimizer.solver.bound_gap_tol, "solver");
    read(s, "max_iterations", c.optimizer.solver.max_iterations, "solver");
    read(s, "randomization_trials", c.optimizer.randomization_trials, "solver");
    read(s, "randomization_seed", c.optimizer.seed, "solver");
  }
  if (const YAML::Node s = root["sweep_n"]) {
    check_keys(s, "sweep_n", {"n_list"});
    read(s, "n_list", c.n_list, "sweep_n");
  }
  if (const YAML::Node s = root["sweep_d12"]) {
    check_keys(s, "sweep_d12", {"d1", "d12_list", "n_elements"});
    read(s, "d1", c.d1, "sweep_d12");
    read(s, "d12_list", c.d12_list, "sweep_d12");
    read(s, "n_elements", c.d12_n_elements, "sweep_d12");
  }
  if (const YAML::Node s = root["rate_region"]) {
    check_keys(s, "rate_region", {"omega_list", "n_elements", "schemes"});
    read(s, "omega_list", c.omega_list, "rate_region");
    read(s, "n_elements", c.region_n_elements, "rate_region");
    c.region_schemes = read_schemes(s, "schemes", c.region_schemes, "rate_region");
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const ExperimentConfig& c) {
  auto point = [](YAML::Emitter& e, const char* key, Point2 p) {
    e << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq << p.x << p.y
      << YAML::EndSeq;
  };
  auto schemes = [](YAML::Emitter& e, const std::vector<SchemeId>& s) {
    e << YAML::Flow << YAML::BeginSeq;
    for (SchemeId id : s) e << to_string(id);
    e << YAML::EndSeq;
  };
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "output_dir" << YAML::Value << c.output_dir.string();
  e << YAML::Key << "seed" << YAML::Value << c.seed;
  e << YAML::Key << "realizations" << YAML::Value << c.realizations;
  e << YAML::Key << "workers" << YAML::Value << c.workers;
  e << YAML::Key << "failure_threshold" << YAML::Value << c.failure_threshold;
  e << YAML::Key << "record_timing" << YAML::Value << c.record_timing;
  e << YAML::Key << "experiments" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (ExperimentKind k : c.experiments) e << to_string(k);
  e << YAML::EndSeq;
  e << YAML::Key << "schemes" << YAML::Value;
  schemes(e, c.schemes);

  e << YAML::Key << "geometry" << YAML::Value << YAML::BeginMap;
  point(e, "hap", c.geometry.hap);
  point(e, "wd1", c.geometry.wd1);
  point(e, "wd2", c.geometry.wd2);
  point(e, "irs", c.geometry.irs);
  e << YAML::EndMap;

  e << YAML::Key << "path_loss" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "c0_db" << YAML::Value << c.path_loss.c0_db;
  e << YAML::Key << "d0" << YAML::Value << c.path_loss.d0;
  e << YAML::Key << "exp_hap_irs" << YAML::Value << c.path_loss.exp_hap_irs;
  e << YAML::Key << "exp_irs_wd" << YAML::Value << c.path_loss.exp_irs_wd;
  e << YAML::Key << "exp_hap_wd" << YAML::Value << c.path_loss.exp_hap_wd;
  e << YAML::Key << "exp_wd_wd" << YAML::Value << c.path_loss.exp_wd_wd;
  e << YAML::EndMap;

  e << YAML::Key << "system" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "p_hap_dbm" << YAML::Value << c.p_hap_dbm;
  e << YAML::Key << "eta" << YAML::Value << c.eta;
  e << YAML::Key << "n0_dbm" << YAML::Value << c.n0_dbm;
  e << YAML::EndMap;

  const SolverSettings& s = c.optimizer.solver;
  e << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "feasibility_tol" << YAML::Value << s.feasibility_tol;
  e << YAML::Key << "objective_tol" << YAML::Value << s.objective_tol;
  e << YAML::Key << "bound_gap_tol" << YAML::Value << s.bound_gap_tol;
  e << YAML::Key << "max_iterations" << YAML::Value << s.max_iterations;
  e << YAML::Key << "randomization_trials" << YAML::Value << c.optimizer.randomization_trials;
  e << YAML::Key << "randomization_seed" << YAML::Value << c.optimizer.seed;
  e << YAML::EndMap;

  e << YAML::Key << "sweep_n" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "n_list" << YAML::Value << YAML::Flow << c.n_list;
  e << YAML::EndMap;
  e << YAML::Key << "sweep_d12" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "d1" << YAML::Value << c.d1;
  e << YAML::Key << "d12_list" << YAML::Value << YAML::Flow << c.d12_list;
  e << YAML::Key << "n_elements" << YAML::Value << c.d12_n_elements;
  e << YAML::EndMap;
  e << YAML::Key << "rate_region" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "omega_list" << YAML::Value << YAML::Flow << c.omega_list;
  e << YAML::Key << "n_elements" << YAML::Value << c.region_n_elements;
  e << YAML::Key << "schemes" << YAML::Value;
  schemes(e, c.region_schemes);
  e << YAML::EndMap;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

}  // namespace irscoop
