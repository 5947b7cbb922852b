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

/* C interface to the irscoop library. Every call returns an irs_status;
 * on failure irs_last_error() describes the most recent error of the
 * calling thread. Handles are opaque and owned by the caller. */
#ifndef IRSCOOP_IRSCOOP_H
#define IRSCOOP_IRSCOOP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define IRS_API __declspec(dllexport)
#else
#define IRS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum irs_status {
  IRS_OK = 0,
  IRS_ERR_INVALID_ARGUMENT = 1,
  IRS_ERR_CONFIG = 2,
  IRS_ERR_IO = 3,
  IRS_ERR_SOLVER = 4,
  IRS_ERR_INTERNAL = 5
} irs_status;

typedef enum irs_scheme {
  IRS_SCHEME_COOP_IRS = 0,
  IRS_SCHEME_INDEP_IRS = 1,
  IRS_SCHEME_COOP_NO_IRS = 2,
  IRS_SCHEME_INDEP_NO_IRS = 3
} irs_scheme;

typedef enum irs_experiment {
  IRS_EXPERIMENT_SWEEP_N = 0,
  IRS_EXPERIMENT_SWEEP_D12 = 1,
  IRS_EXPERIMENT_RATE_REGION = 2
} irs_experiment;

typedef struct irs_config irs_config;
typedef struct irs_results irs_results;
typedef struct irs_realization irs_realization;

typedef struct irs_solution_info {
  int status; /* 0 optimal, 1 infeasible, 2 numerical limit */
  double min_rate;
  double r1;
  double r2;
  double r_bar_star;
  double gap;
} irs_solution_info;

IRS_API const char* irs_version(void);
IRS_API const char* irs_last_error(void);
IRS_API const char* irs_status_string(irs_status status);

/* Configuration. */
IRS_API irs_status irs_config_default(irs_config** out);
IRS_API irs_status irs_config_load(const char* path, irs_config** out);
IRS_API irs_status irs_config_parse(const char* yaml_text, irs_config** out);
IRS_API void irs_config_free(irs_config* config);
IRS_API irs_status irs_config_set_output_dir(irs_config* config, const char* dir);
IRS_API irs_status irs_config_set_workers(irs_config* config, int workers);
IRS_API irs_status irs_config_set_realizations(irs_config* config, int realizations);
IRS_API irs_status irs_config_set_seed(irs_config* config, uint64_t seed);
IRS_API irs_status irs_config_failure_threshold(const irs_config* config, double* out);
/* Number of experiments listed in the config and the i-th of them. */
IRS_API irs_status irs_config_experiment_count(const irs_config* config, size_t* out);
IRS_API irs_status irs_config_experiment(const irs_config* config, size_t index,
                                         irs_experiment* out);
/* YAML echo; the string lives until the handle is freed or dumped again. */
IRS_API irs_status irs_config_dump(irs_config* config, const char** out);

/* Experiments. A results handle accumulates tables across runs. */
IRS_API irs_status irs_results_new(irs_results** out);
IRS_API void irs_results_free(irs_results* results);
IRS_API irs_status irs_run_experiment(const irs_config* config, irs_experiment kind,
                                      irs_results* results);
IRS_API irs_status irs_results_row_count(const irs_results* results, size_t* out);
IRS_API irs_status irs_results_failure_rate(const irs_results* results, double* out);
/* Writes CSVs, manifest.json and plot_figures.py into the output dir. */
IRS_API irs_status irs_results_emit(const irs_results* results, const irs_config* config);

/* Single instances. */
IRS_API irs_status irs_realization_sample(const irs_config* config, int n_elements,
                                          uint64_t seed, irs_realization** out);
IRS_API void irs_realization_free(irs_realization* realization);
IRS_API irs_status irs_solve(const irs_config* config, const irs_realization* realization,
                             irs_scheme scheme, irs_solution_info* out);
IRS_API irs_status irs_solve_weighted(const irs_config* config,
                                      const irs_realization* realization, irs_scheme scheme,
                                      double omega, irs_solution_info* out);

/* Invariant audit on `count` random instances. Writes one line per check
 * through `sink` and stores 1 in *all_passed when every check holds. */
typedef void (*irs_line_sink)(const char* line, void* user);
IRS_API irs_status irs_validate(const irs_config* config, int count, irs_line_sink sink,
                                void* user, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif /* IRSCOOP_IRSCOOP_H */
