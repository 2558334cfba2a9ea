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

#ifndef QECFILTER_HARNESS_HPP
#define QECFILTER_HARNESS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qecfilter/baselines.hpp"
#include "qecfilter/core.hpp"
#include "qecfilter/filter_log.hpp"
#include "qecfilter/filter_optimal.hpp"
#include "qecfilter/simulator.hpp"

namespace qecf {

enum class FilterKind {
    Optimal,
    TwoTerm,
    OneTerm,
    Wonham,
    Threshold,
};

enum class SweepAxis {
    Duration,
    ErrorRate,
    TimeStep,
};

const char *filter_name(FilterKind kind) noexcept;
FilterKind parse_filter(const std::string &name);
/// Comma separated names; "all" selects every filter.
std::vector<FilterKind> parse_filter_list(const std::string &list);
const char *axis_name(SweepAxis axis) noexcept;
SweepAxis parse_axis(const std::string &name);

/// Reference histogram options for the optimal filter.
struct HistogramOptions {
    int n = 25;
    uint64_t samples = 1000000;
    uint64_t seed = 1;
    double tail = 1e-6;
    std::string cache_dir;  // empty: build in memory only
};

struct ExperimentSpec {
    SweepAxis axis = SweepAxis::Duration;
    std::vector<double> values;
    RunConfig fixed;
    std::vector<FilterKind> filters;
    unsigned threads = 1;
    ThresholdParams threshold;
    HistogramOptions histograms;
    /// Score every step instead of the final one. Not used for benchmarks.
    bool per_step_scoring = false;

    void validate() const;
    RunConfig config_at(size_t index) const;
};

struct ResultRow {
    std::string filter;
    std::string axis;
    double axis_value = 0;
    double inaccuracy = 0;
    double stderr_ = 0;
    uint32_t trials = 0;
    double mu = 0;
    double T = 0;
    double k = 0;
    double duration = 0;  // effective, steps * T
    uint64_t seed = 0;
    uint64_t steps = 0;
};

/// 1 when the prediction is the true state or one flip away from it.
int score(StateIndex predicted, StateIndex truth) noexcept;

/// Standard error of a Bernoulli mean.
double bernoulli_stderr(double p, uint64_t n) noexcept;

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<ResultRow> rows;
    int n_max = 0;  // error cutoff used by the optimal filter, 0 if unused
};

using ProgressFn = std::function<void(const std::string &)>;

/// Runs every filter in lockstep on shared trajectories for each axis value.
ExperimentResult run_experiment(const ExperimentSpec &spec, const ProgressFn &progress = {});

extern const char *const kCsvHeader;
std::string results_csv(const std::vector<ResultRow> &rows);
void write_results_csv(const std::string &path, const std::vector<ResultRow> &rows);
std::string results_metadata_json(const ExperimentResult &result);
void write_results_metadata(const std::string &path, const ExperimentResult &result);

/// Writes `trial,i,true_state,s1bar,s2bar,m1,m2` and `trial,qubit,time_us`.
void dump_trajectories(const RunConfig &config, uint32_t trials, const std::string &intervals_path,
                       const std::string &events_path);

struct DiagnosticsOptions {
    std::vector<ScheduledFlip> schedule;  // empty: random errors
    bool use_schedule = false;
    LogMode mode = LogMode::TwoTerm;
    double significance = -4.0;  // L - L* above this counts as significant
};

struct DiagnosticsResult {
    RunConfig config;
    uint32_t trials = 0;
    uint64_t steps = 0;
    double delta = 0;
    /// [step][prev][next] trial means of L - max over the column.
    std::vector<Matrix8> mean_relative_L;
    /// [step][prev][next] fraction of trials with L - L* > significance.
    std::vector<Matrix8> significant_fraction;
    /// [step][state] trial means of the normalized log posterior.
    std::vector<Vector8> mean_log_posterior;
    /// Largest magnitude among the log-posterior entries.
    std::vector<double> uncorrected_mean, uncorrected_sd;
    std::vector<double> corrected_mean, corrected_sd;
    /// log10 of the largest un-normalized Wonham entry, trial mean.
    std::vector<double> wonham_log10_mean;
    /// Fraction of trials whose corrected and uncorrected argmax agree.
    std::vector<double> argmax_agreement;
};

DiagnosticsResult diagnostics_run(const RunConfig &config, uint32_t trials, const DiagnosticsOptions &options,
                                  unsigned threads = 1);
/// Writes `<prefix>_L.csv`, `<prefix>_posterior.csv` and `<prefix>_norms.csv`.
void write_diagnostics(const std::string &prefix, const DiagnosticsResult &result);

struct ThresholdSearchEntry {
    ThresholdParams params;
    double inaccuracy = 0;
};

struct ThresholdSearch {
    std::vector<ThresholdSearchEntry> entries;
    ThresholdParams best;
    double best_inaccuracy = 1;
};

/// Coarse grid search of the threshold parameters on shared trajectories.
ThresholdSearch tune_threshold(const RunConfig &config, const std::vector<double> &taus,
                               const std::vector<double> &lows, const std::vector<double> &highs, unsigned threads = 1);

/// Runs `fn(worker, index)` for index in [0, count) on a pool of workers.
void parallel_for(uint64_t count, unsigned threads, const std::function<void(unsigned, uint64_t)> &fn);

}  // namespace qecf

#endif
