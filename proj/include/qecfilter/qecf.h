// Copyright 2026 The qecfilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QECFILTER_QECF_H
#define QECFILTER_QECF_H

/* C interface to the qecfilter library.
 *
 * Objects are opaque handles created by `*_create`/`*_simulate`/`*_run` calls
 * and released with the matching `*_free`. Every call that can fail returns a
 * qecf_status; the message of the most recent failure on the calling thread
 * is available from qecf_last_error(). */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(QECF_BUILDING_LIBRARY)
#define QECF_API __declspec(dllexport)
#else
#define QECF_API __declspec(dllimport)
#endif
#else
#define QECF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qecf_status {
    QECF_OK = 0,
    QECF_INVALID_ARGUMENT = 1,
    QECF_IO = 2,
    QECF_NUMERIC = 3,
    QECF_CONFIG_MISMATCH = 4,
    QECF_INTERNAL = 5,
} qecf_status;

typedef enum qecf_filter_kind {
    QECF_FILTER_OPTIMAL = 0,
    QECF_FILTER_TWO_TERM = 1,
    QECF_FILTER_ONE_TERM = 2,
    QECF_FILTER_WONHAM = 3,
    QECF_FILTER_THRESHOLD = 4,
} qecf_filter_kind;

typedef enum qecf_axis {
    QECF_AXIS_DURATION = 0,
    QECF_AXIS_ERROR_RATE = 1,
    QECF_AXIS_TIME_STEP = 2,
} qecf_axis;

/* Physical parameters; times in microseconds, rates in 1/us. */
typedef struct qecf_run_config {
    double mu;
    double T;
    double k;
    double duration;
    uint64_t seed;
    uint32_t trials;
    int initial_state;
} qecf_run_config;

typedef struct qecf_threshold_params {
    double ema_time_constant;
    double eta_low;
    double eta_high;
} qecf_threshold_params;

typedef struct qecf_histogram_options {
    int n;
    uint64_t samples;
    uint64_t seed;
    double tail;
    const char *cache_dir; /* NULL or "" keeps histograms in memory */
} qecf_histogram_options;

typedef struct qecf_experiment_spec {
    qecf_axis axis;
    const double *values;
    size_t value_count;
    qecf_run_config fixed;
    const qecf_filter_kind *filters;
    size_t filter_count;
    unsigned threads;
    qecf_threshold_params threshold;
    qecf_histogram_options histograms;
    int per_step_scoring;
} qecf_experiment_spec;

typedef struct qecf_interval {
    int true_state;
    double s1bar;
    double s2bar;
    double m1;
    double m2;
} qecf_interval;

typedef struct qecf_result_row {
    const char *filter;
    const char *axis;
    double axis_value;
    double inaccuracy;
    double stderr_;
    uint32_t trials;
    double mu;
    double T;
    double k;
    double duration;
    uint64_t seed;
} qecf_result_row;

typedef struct qecf_trajectory qecf_trajectory;
typedef struct qecf_tables qecf_tables;
typedef struct qecf_filter qecf_filter;
typedef struct qecf_results qecf_results;

QECF_API const char *qecf_version(void);
QECF_API const char *qecf_status_string(qecf_status status);
/* Message of the last failure on this thread; empty if none. */
QECF_API const char *qecf_last_error(void);

/* Defaults: mu 2.5e-3, T 0.1, k 0.5, duration 100, seed 1, 10000 trials. */
QECF_API void qecf_run_config_default(qecf_run_config *out);
QECF_API void qecf_threshold_params_default(qecf_threshold_params *out);
QECF_API void qecf_histogram_options_default(qecf_histogram_options *out);
QECF_API void qecf_experiment_spec_default(qecf_experiment_spec *out);

QECF_API qecf_status qecf_trajectory_simulate(const qecf_run_config *config, uint64_t trial, qecf_trajectory **out);
QECF_API size_t qecf_trajectory_length(const qecf_trajectory *trajectory);
QECF_API qecf_status qecf_trajectory_interval(const qecf_trajectory *trajectory, size_t i, qecf_interval *out);
QECF_API size_t qecf_trajectory_event_count(const qecf_trajectory *trajectory);
QECF_API qecf_status qecf_trajectory_event(const qecf_trajectory *trajectory, size_t i, int *qubit, double *time_us);
QECF_API void qecf_trajectory_free(qecf_trajectory *trajectory);

/* Density tables for the optimal filter at one (mu, T, k). */
QECF_API qecf_status qecf_tables_build(const qecf_run_config *config, const qecf_histogram_options *options,
                                       unsigned threads, qecf_tables **out);
QECF_API void qecf_tables_free(qecf_tables *tables);

/* `tables` is required for QECF_FILTER_OPTIMAL and ignored otherwise.
 * `threshold` may be NULL for defaults. */
QECF_API qecf_status qecf_filter_create(qecf_filter_kind kind, const qecf_run_config *config,
                                        const qecf_tables *tables, const qecf_threshold_params *threshold,
                                        qecf_filter **out);
QECF_API qecf_status qecf_filter_step(qecf_filter *filter, double m1, double m2, int *predicted);
/* Normalized probabilities for the Bayesian filters, log-probabilities for
 * the log filters, and a one-hot belief for the threshold filter. */
QECF_API qecf_status qecf_filter_state(const qecf_filter *filter, double out[8]);
QECF_API qecf_status qecf_filter_reset(qecf_filter *filter, int initial_state);
QECF_API void qecf_filter_free(qecf_filter *filter);

QECF_API qecf_status qecf_experiment_run(const qecf_experiment_spec *spec, qecf_results **out);
QECF_API size_t qecf_results_count(const qecf_results *results);
/* Strings in `out` stay valid until the results are freed. */
QECF_API qecf_status qecf_results_row(const qecf_results *results, size_t i, qecf_result_row *out);
QECF_API qecf_status qecf_results_write_csv(const qecf_results *results, const char *path);
QECF_API qecf_status qecf_results_write_metadata(const qecf_results *results, const char *path);
QECF_API void qecf_results_free(qecf_results *results);

QECF_API qecf_status qecf_simulate_dump(const qecf_run_config *config, uint32_t trials, const char *intervals_path,
                                        const char *events_path);

/* Averaged L-terms, log-posteriors and norm traces. With flip_count > 0 the
 * given flips replace the random error process. */
QECF_API qecf_status qecf_diagnostics_run(const qecf_run_config *config, uint32_t trials, const int *flip_qubits,
                                          const double *flip_times_us, size_t flip_count, int one_term,
                                          unsigned threads, const char *out_prefix);

/* Builds (or extends) the on-disk histogram cache for errors up to n_max. */
QECF_API qecf_status qecf_build_tables(const qecf_histogram_options *options, int n_max, unsigned threads,
                                       char *path_out, size_t path_capacity);

/* Smallest error cutoff whose Poisson tail at mu*T is below `tail`. */
QECF_API int qecf_choose_n_max(double mu_T, double tail);

#ifdef __cplusplus
}
#endif

#endif
