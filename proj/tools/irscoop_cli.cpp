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

// Command-line driver for the Monte-Carlo experiments.
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "irscoop/irscoop.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitFailures = 2;
constexpr int kExitRuntime = 3;

struct Options {
  std::string config;
  std::string output;
  std::optional<int> workers;
  std::optional<int> realizations;
  std::optional<std::uint64_t> seed;
  int count = 200;
};

int report(irs_status s) {
  std::fprintf(stderr, "error: %s: %s\n", irs_status_string(s), irs_last_error());
  return s == IRS_ERR_CONFIG || s == IRS_ERR_INVALID_ARGUMENT ? kExitConfig : kExitRuntime;
}

struct ConfigHandle {
  irs_config* ptr = nullptr;
  ~ConfigHandle() { irs_config_free(ptr); }
};

struct ResultsHandle {
  irs_results* ptr = nullptr;
  ~ResultsHandle() { irs_results_free(ptr); }
};

irs_status load(const Options& o, ConfigHandle& h) {
  irs_status s = o.config.empty() ? irs_config_default(&h.ptr) : irs_config_load(o.config.c_str(), &h.ptr);
  if (s != IRS_OK) return s;
  if (!o.output.empty() && (s = irs_config_set_output_dir(h.ptr, o.output.c_str())) != IRS_OK) return s;
  if (o.workers && (s = irs_config_set_workers(h.ptr, *o.workers)) != IRS_OK) return s;
  if (o.realizations && (s = irs_config_set_realizations(h.ptr, *o.realizations)) != IRS_OK) return s;
  if (o.seed && (s = irs_config_set_seed(h.ptr, *o.seed)) != IRS_OK) return s;
  return IRS_OK;
}

const char* experiment_name(irs_experiment e) {
  switch (e) {
    case IRS_EXPERIMENT_SWEEP_N: return "sweep-n";
    case IRS_EXPERIMENT_SWEEP_D12: return "sweep-d12";
    case IRS_EXPERIMENT_RATE_REGION: return "rate-region";
  }
  return "?";
}

int run(const Options& o, std::optional<irs_experiment> only) {
  ConfigHandle cfg;
  if (irs_status s = load(o, cfg); s != IRS_OK) return report(s);
  std::vector<irs_experiment> kinds;
  if (only) {
    kinds.push_back(*only);
  } else {
    size_t n = 0;
    irs_config_experiment_count(cfg.ptr, &n);
    for (size_t i = 0; i < n; ++i) {
      irs_experiment e;
      irs_config_experiment(cfg.ptr, i, &e);
      kinds.push_back(e);
    }
  }
  ResultsHandle res;
  if (irs_status s = irs_results_new(&res.ptr); s != IRS_OK) return report(s);
  for (irs_experiment e : kinds) {
    std::fprintf(stderr, "running %s\n", experiment_name(e));
    if (irs_status s = irs_run_experiment(cfg.ptr, e, res.ptr); s != IRS_OK) return report(s);
  }
  if (irs_status s = irs_results_emit(res.ptr, cfg.ptr); s != IRS_OK) return report(s);

  size_t rows = 0;
  double rate = 0.0, threshold = 0.0;
  irs_results_row_count(res.ptr, &rows);
  irs_results_failure_rate(res.ptr, &rate);
  irs_config_failure_threshold(cfg.ptr, &threshold);
  std::printf("%zu rows, failure rate %.4f\n", rows, rate);
  if (rate > threshold) {
    std::fprintf(stderr, "failure rate %.4f above threshold %.4f\n", rate, threshold);
    return kExitFailures;
  }
  return kExitOk;
}

int validate(const Options& o) {
  ConfigHandle cfg;
  if (irs_status s = load(o, cfg); s != IRS_OK) return report(s);
  int passed = 0;
  auto sink = [](const char* line, void*) { std::printf("%s\n", line); };
  if (irs_status s = irs_validate(cfg.ptr, o.count, sink, nullptr, &passed); s != IRS_OK) {
    return report(s);
  }
  return passed ? kExitOk : kExitFailures;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("-c,--config", o.config, "YAML config file (defaults apply when omitted)")
      ->check(CLI::ExistingFile);
  cmd->add_option("-o,--output", o.output, "Output directory");
  cmd->add_option("-w,--workers", o.workers, "Worker threads, 0 for all cores");
  cmd->add_option("-r,--realizations", o.realizations, "Channel realizations per sweep point");
  cmd->add_option("-s,--seed", o.seed, "Master seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IRS-assisted cooperation WPCN simulator"};
  app.set_version_flag("--version", std::string(irs_version()));
  app.require_subcommand(1);
  Options o;

  auto* run_cmd = app.add_subcommand("run", "Run every experiment listed in the config");
  add_common(run_cmd, o);
  auto* sweep_n = app.add_subcommand("sweep-n", "Throughput versus number of elements");
  add_common(sweep_n, o);
  auto* sweep_d12 = app.add_subcommand("sweep-d12", "Throughput versus inter-user distance");
  add_common(sweep_d12, o);
  auto* region = app.add_subcommand("rate-region", "Weighted-sum rate region");
  add_common(region, o);
  auto* val = app.add_subcommand("validate", "Invariant audit on random instances");
  add_common(val, o);
  val->add_option("-n,--count", o.count, "Number of instances")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*run_cmd) return run(o, std::nullopt);
  if (*sweep_n) return run(o, IRS_EXPERIMENT_SWEEP_N);
  if (*sweep_d12) return run(o, IRS_EXPERIMENT_SWEEP_D12);
  if (*region) return run(o, IRS_EXPERIMENT_RATE_REGION);
  return validate(o);
}
