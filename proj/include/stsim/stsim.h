// SPDX-License-Identifier: Apache-2.0
//
// stsim: randomized space-time coded stacked metasurface downlink simulator
// Copyright (C) 2026 stsim developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

/* C interface of the stsim simulator.
 *
 * Objects are opaque handles created and destroyed through this API. Every
 * fallible call returns a status code; on failure the message of the last
 * error on the calling thread is available from stsim_last_error(). Strings
 * returned through char** out-parameters are owned by the caller and must be
 * released with stsim_string_free().
 */
#ifndef STSIM_STSIM_H
#define STSIM_STSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define STSIM_API __declspec(dllexport)
#else
#  define STSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum stsim_status
{
    STSIM_OK = 0,
    STSIM_ERROR_INVALID_ARGUMENT = 1, /* null handle or pointer */
    STSIM_ERROR_CONFIG = 2,           /* invalid or inconsistent configuration */
    STSIM_ERROR_INDEX = 3,            /* index out of range */
    STSIM_ERROR_DOMAIN = 4,           /* argument outside the mathematical domain */
    STSIM_ERROR_USAGE = 5,            /* valid arguments used in the wrong combination */
    STSIM_ERROR_NUMERIC = 6,          /* numerical failure, e.g. a degenerate draw */
    STSIM_ERROR_IO = 7,               /* file could not be read or written */
    STSIM_ERROR_INTERNAL = 8
} stsim_status;

typedef struct stsim_experiment stsim_experiment;
typedef struct stsim_results stsim_results;
typedef struct stsim_synthesis stsim_synthesis;

/* One CSV row. u and m are -1 for metrics that do not depend on them.
 * metric points into the results object and lives as long as it does. */
typedef struct stsim_record
{
    int q;
    int l_pc;
    int u;
    int m;
    int trial;
    const char *metric;
    double value;
    uint64_t seed;
    double elapsed_s;
    int failed;
} stsim_record;

typedef struct stsim_overhead_counts
{
    double train_partial;
    double train_full;
    double feed_partial;
    double feed_full;
    int slots_within_budget;
} stsim_overhead_counts;

STSIM_API const char *stsim_version(void);
STSIM_API const char *stsim_status_string(stsim_status status);
/* Message of the last failed call on this thread, "" if none */
STSIM_API const char *stsim_last_error(void);
STSIM_API void stsim_string_free(char *str);

/* Experiment configuration */
STSIM_API stsim_status stsim_experiment_create_preset(const char *name, stsim_experiment **out);
STSIM_API stsim_status stsim_experiment_create_from_json(const char *json, stsim_experiment **out);
STSIM_API stsim_status stsim_experiment_load(const char *path, stsim_experiment **out);
STSIM_API void stsim_experiment_destroy(stsim_experiment *config);

STSIM_API stsim_status stsim_experiment_set_seed(stsim_experiment *config, uint64_t seed);
STSIM_API stsim_status stsim_experiment_set_trials(stsim_experiment *config, int trials);
STSIM_API stsim_status stsim_experiment_set_scale(stsim_experiment *config, double scale);
STSIM_API stsim_status stsim_experiment_set_threads(stsim_experiment *config, int threads);
STSIM_API stsim_status stsim_experiment_set_output(stsim_experiment *config, const char *csv_path);
STSIM_API stsim_status stsim_experiment_set_summary_output(stsim_experiment *config, const char *json_path);
/* "per-slot" or "coherence" */
STSIM_API stsim_status stsim_experiment_set_fairness_variant(stsim_experiment *config, const char *name);
STSIM_API stsim_status stsim_experiment_set_pathloss_exponent(stsim_experiment *config, double eta);
STSIM_API stsim_status stsim_experiment_set_reference_distance(stsim_experiment *config, double d0);
STSIM_API stsim_status stsim_experiment_set_max_iterations(stsim_experiment *config, int iterations);

/* Fully resolved config as JSON */
STSIM_API stsim_status stsim_experiment_to_json(const stsim_experiment *config, char **out_json);
/* Newline-separated violations (STSIM_ERROR_CONFIG) or STSIM_OK */
STSIM_API stsim_status stsim_experiment_validate(const stsim_experiment *config, char **out_messages);
/* Newline-separated non-fatal warnings, possibly empty */
STSIM_API stsim_status stsim_experiment_warnings(const stsim_experiment *config, char **out_messages);
STSIM_API stsim_status stsim_experiment_csv_path(const stsim_experiment *config, char **out_path);
STSIM_API stsim_status stsim_experiment_summary_path(const stsim_experiment *config, char **out_path);

/* Running */
STSIM_API stsim_status stsim_experiment_run(const stsim_experiment *config, stsim_results **out);
STSIM_API void stsim_results_destroy(stsim_results *results);
STSIM_API size_t stsim_results_count(const stsim_results *results);
STSIM_API stsim_status stsim_results_get(const stsim_results *results, size_t index, stsim_record *out);
STSIM_API stsim_status stsim_results_write_csv(const stsim_results *results, const char *path);
STSIM_API stsim_status stsim_results_write_summary(const stsim_results *results, const stsim_experiment *config,
                                                   const char *path);

/* Single synthesis run on the first sweep point */
STSIM_API stsim_status stsim_synthesize(const stsim_experiment *config, stsim_synthesis **out);
STSIM_API void stsim_synthesis_destroy(stsim_synthesis *synthesis);
STSIM_API stsim_status stsim_synthesis_objective_db(const stsim_synthesis *synthesis, double *out);
STSIM_API stsim_status stsim_synthesis_iterations(const stsim_synthesis *synthesis, int *out);
STSIM_API stsim_status stsim_synthesis_radiated_power_ratio(const stsim_synthesis *synthesis, double *out);
STSIM_API stsim_status stsim_synthesis_write_trace(const stsim_synthesis *synthesis, const char *path);
/* Stack description (geometry and kinds) as JSON */
STSIM_API stsim_status stsim_synthesis_stack_json(const stsim_synthesis *synthesis, char **out_json);

/* Stateless helpers */
STSIM_API stsim_status stsim_rs_kernel(double distance, double wavelength, double element_area, double separation,
                                       double *out_re, double *out_im);
STSIM_API stsim_status stsim_overhead(int n, int m, int u, int v, double eta_feedback, stsim_overhead_counts *out);

#ifdef __cplusplus
}
#endif

#endif
