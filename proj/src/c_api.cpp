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

#include "irscoop/irscoop.h"

#include <exception>
#include <string>
#include <vector>

#include "irscoop/harness.hpp"
#include "irscoop/version.hpp"

struct irs_config {
  irscoop::ExperimentConfig value;
  std::string dump;
};

struct irs_results {
  std::vector<irscoop::ResultTable> tables;
};

struct irs_realization {
  irscoop::ChannelRealization value;
};

namespace {

thread_local std::string g_last_error;

irs_status fail(irs_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <class F>
irs_status guarded(F&& body) {
  try {
    body();
    return IRS_OK;
  } catch (const irscoop::ConfigError& e) {
    return fail(IRS_ERR_CONFIG, e.what());
  } catch (const irscoop::OutputError& e) {
    return fail(IRS_ERR_IO, e.what());
  } catch (const irscoop::ProblemError& e) {
    return fail(IRS_ERR_SOLVER, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(IRS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(IRS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(IRS_ERR_INTERNAL, "unknown error");
  }
}

irs_status null_arg(const char* what) {
  return fail(IRS_ERR_INVALID_ARGUMENT, std::string(what) + " is null");
}

irscoop::SchemeId scheme_of(irs_scheme s) {
  switch (s) {
    case IRS_SCHEME_COOP_IRS: return irscoop::SchemeId::CoopWithIrs;
    case IRS_SCHEME_INDEP_IRS: return irscoop::SchemeId::IndepWithIrs;
    case IRS_SCHEME_COOP_NO_IRS: return irscoop::SchemeId::CoopNoIrs;
    case IRS_SCHEME_INDEP_NO_IRS: return irscoop::SchemeId::IndepNoIrs;
  }
  throw std::invalid_argument("unknown scheme");
}

irscoop::ExperimentKind kind_of(irs_experiment e) {
  switch (e) {
    case IRS_EXPERIMENT_SWEEP_N: return irscoop::ExperimentKind::SweepN;
    case IRS_EXPERIMENT_SWEEP_D12: return irscoop::ExperimentKind::SweepD12;
    case IRS_EXPERIMENT_RATE_REGION: return irscoop::ExperimentKind::RateRegion;
  }
  throw std::invalid_argument("unknown experiment");
}

void fill(const irscoop::RecoveredSolution& s, irs_solution_info* out) {
  out->status = static_cast<int>(s.status);
  out->min_rate = s.min_rate;
  out->r1 = s.r1;
  out->r2 = s.r2;
  out->r_bar_star = s.r_bar_star;
  out->gap = s.gap;
}

irs_status solve_impl(const irs_config* config, const irs_realization* r, irs_scheme scheme,
                      irscoop::Objective obj, irs_solution_info* out) {
  if (!config) return null_arg("config");
  if (!r) return null_arg("realization");
  if (!out) return null_arg("out");
  return guarded([&] {
    fill(irscoop::solve_scheme(scheme_of(scheme), r->value, config->value.params(),
                               config->value.optimizer, obj),
         out);
  });
}

}  // namespace

extern "C" {

const char* irs_version(void) { return irscoop::kVersion; }

const char* irs_last_error(void) { return g_last_error.c_str(); }

const char* irs_status_string(irs_status status) {
  switch (status) {
    case IRS_OK: return "ok";
    case IRS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case IRS_ERR_CONFIG: return "config error";
    case IRS_ERR_IO: return "i/o error";
    case IRS_ERR_SOLVER: return "solver error";
    case IRS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

irs_status irs_config_default(irs_config** out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = new irs_config{}; });
}

irs_status irs_config_load(const char* path, irs_config** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new irs_config{irscoop::load_config(path), {}}; });
}

irs_status irs_config_parse(const char* yaml_text, irs_config** out) {
  if (!yaml_text) return null_arg("yaml_text");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new irs_config{irscoop::parse_config(yaml_text), {}}; });
}

void irs_config_free(irs_config* config) { delete config; }

irs_status irs_config_set_output_dir(irs_config* config, const char* dir) {
  if (!config) return null_arg("config");
  if (!dir || !*dir) return fail(IRS_ERR_INVALID_ARGUMENT, "output dir is empty");
  config->value.output_dir = dir;
  return IRS_OK;
}

irs_status irs_config_set_workers(irs_config* config, int workers) {
  if (!config) return null_arg("config");
  if (workers < 0) return fail(IRS_ERR_INVALID_ARGUMENT, "workers must be >= 0");
  config->value.workers = workers;
  return IRS_OK;
}

irs_status irs_config_set_realizations(irs_config* config, int realizations) {
  if (!config) return null_arg("config");
  if (realizations < 1) return fail(IRS_ERR_INVALID_ARGUMENT, "realizations must be >= 1");
  config->value.realizations = realizations;
  return IRS_OK;
}

irs_status irs_config_set_seed(irs_config* config, uint64_t seed) {
  if (!config) return null_arg("config");
  config->value.seed = seed;
  return IRS_OK;
}

irs_status irs_config_failure_threshold(const irs_config* config, double* out) {
  if (!config) return null_arg("config");
  if (!out) return null_arg("out");
  *out = config->value.failure_threshold;
  return IRS_OK;
}

irs_status irs_config_experiment_count(const irs_config* config, size_t* out) {
  if (!config) return null_arg("config");
  if (!out) return null_arg("out");
  *out = config->value.experiments.size();
  return IRS_OK;
}

irs_status irs_config_experiment(const irs_config* config, size_t index, irs_experiment* out) {
  if (!config) return null_arg("config");
  if (!out) return null_arg("out");
  if (index >= config->value.experiments.size()) {
    return fail(IRS_ERR_INVALID_ARGUMENT, "experiment index out of range");
  }
  *out = static_cast<irs_experiment>(config->value.experiments[index]);
  return IRS_OK;
}

irs_status irs_config_dump(irs_config* config, const char** out) {
  if (!config) return null_arg("config");
  if (!out) return null_arg("out");
  return guarded([&] {
    config->dump = irscoop::dump_config(config->value);
    *out = config->dump.c_str();
  });
}

irs_status irs_results_new(irs_results** out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = new irs_results{}; });
}

void irs_results_free(irs_results* results) { delete results; }

irs_status irs_run_experiment(const irs_config* config, irs_experiment kind,
                              irs_results* results) {
  if (!config) return null_arg("config");
  if (!results) return null_arg("results");
  return guarded([&] {
    results->tables.push_back(irscoop::run_experiment(config->value, kind_of(kind)));
  });
}

irs_status irs_results_row_count(const irs_results* results, size_t* out) {
  if (!results) return null_arg("results");
  if (!out) return null_arg("out");
  *out = 0;
  for (const auto& t : results->tables) *out += t.rows.size();
  return IRS_OK;
}

irs_status irs_results_failure_rate(const irs_results* results, double* out) {
  if (!results) return null_arg("results");
  if (!out) return null_arg("out");
  *out = irscoop::failure_rate(results->tables);
  return IRS_OK;
}

irs_status irs_results_emit(const irs_results* results, const irs_config* config) {
  if (!results) return null_arg("results");
  if (!config) return null_arg("config");
  return guarded([&] { irscoop::emit_outputs(results->tables, config->value); });
}

irs_status irs_realization_sample(const irs_config* config, int n_elements, uint64_t seed,
                                  irs_realization** out) {
  if (!config) return null_arg("config");
  if (!out) return null_arg("out");
  if (n_elements < 0) return fail(IRS_ERR_INVALID_ARGUMENT, "n_elements must be >= 0");
  return guarded([&] {
    *out = new irs_realization{irscoop::sample_realization(
        config->value.geometry, config->value.path_loss, n_elements, seed)};
  });
}

void irs_realization_free(irs_realization* realization) { delete realization; }

irs_status irs_solve(const irs_config* config, const irs_realization* realization,
                     irs_scheme scheme, irs_solution_info* out) {
  return solve_impl(config, realization, scheme, irscoop::Objective::min_rate(), out);
}

irs_status irs_solve_weighted(const irs_config* config, const irs_realization* realization,
                              irs_scheme scheme, double omega, irs_solution_info* out) {
  if (!(omega >= 0.0 && omega <= 1.0)) {
    return fail(IRS_ERR_INVALID_ARGUMENT, "omega must lie in [0, 1]");
  }
  return solve_impl(config, realization, scheme, irscoop::Objective::weighted_sum(omega), out);
}

irs_status irs_validate(const irs_config* config, int count, irs_line_sink sink, void* user,
                        int* all_passed) {
  if (!config) return null_arg("config");
  if (!all_passed) return null_arg("all_passed");
  return guarded([&] {
    bool ok = true;
    for (const auto& line : irscoop::run_validation(config->value, count)) {
      ok = ok && line.passed;
      if (sink) {
        const std::string text =
            std::string(line.passed ? "PASS " : "FAIL ") + line.name + ": " + line.detail;
        sink(text.c_str(), user);
      }
    }
    *all_passed = ok ? 1 : 0;
  });
}

}  // extern "C"
