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

#include "qecfilter/qecf.h"

#include <cstdio>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <variant>

#include "qecfilter/harness.hpp"

using namespace qecf;

struct qecf_trajectory {
    TrajectoryRecord record;
};

struct qecf_tables {
    std::shared_ptr<const MeasurementDensityTable> table;
};

struct qecf_filter {
    std::variant<OptimalFilter, LogFilter, WonhamFilter, ThresholdFilter> f;
};

struct qecf_results {
    ExperimentResult result;
};

namespace {

thread_local std::string last_error;

qecf_status status_of(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument:
            return QECF_INVALID_ARGUMENT;
        case ErrorKind::Io:
            return QECF_IO;
        case ErrorKind::Numeric:
            return QECF_NUMERIC;
        case ErrorKind::ConfigMismatch:
            return QECF_CONFIG_MISMATCH;
    }
    return QECF_INTERNAL;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
qecf_status guarded(Fn &&fn) {
    try {
        last_error.clear();
        fn();
        return QECF_OK;
    } catch (const Error &e) {
        last_error = e.what();
        return status_of(e.kind());
    } catch (const std::bad_alloc &) {
        last_error = "out of memory";
        return QECF_INTERNAL;
    } catch (const std::exception &e) {
        last_error = e.what();
        return QECF_INTERNAL;
    } catch (...) {
        last_error = "unknown failure";
        return QECF_INTERNAL;
    }
}

void require(const void *p, const char *what) {
    if (p == nullptr) {
        fail(ErrorKind::InvalidArgument, std::string(what) + " must not be null");
    }
}

RunConfig to_config(const qecf_run_config *c) {
    require(c, "config");
    RunConfig r;
    r.mu = c->mu;
    r.T = c->T;
    r.k = c->k;
    r.duration = c->duration;
    r.seed = c->seed;
    r.trials = c->trials;
    r.initial_state = c->initial_state;
    return r;
}

ThresholdParams to_threshold(const qecf_threshold_params *p) {
    ThresholdParams t;
    if (p != nullptr) {
        t.ema_time_constant = p->ema_time_constant;
        t.eta_low = p->eta_low;
        t.eta_high = p->eta_high;
    }
    return t;
}

HistogramOptions to_histograms(const qecf_histogram_options *o) {
    HistogramOptions h;
    if (o != nullptr) {
        h.n = o->n;
        h.samples = o->samples;
        h.seed = o->seed;
        h.tail = o->tail;
        h.cache_dir = o->cache_dir != nullptr ? o->cache_dir : "";
    }
    return h;
}

FilterKind to_kind(qecf_filter_kind k) {
    switch (k) {
        case QECF_FILTER_OPTIMAL:
            return FilterKind::Optimal;
        case QECF_FILTER_TWO_TERM:
            return FilterKind::TwoTerm;
        case QECF_FILTER_ONE_TERM:
            return FilterKind::OneTerm;
        case QECF_FILTER_WONHAM:
            return FilterKind::Wonham;
        case QECF_FILTER_THRESHOLD:
            return FilterKind::Threshold;
    }
    fail(ErrorKind::InvalidArgument, "unknown filter kind");
}

SweepAxis to_axis(qecf_axis a) {
    switch (a) {
        case QECF_AXIS_DURATION:
            return SweepAxis::Duration;
        case QECF_AXIS_ERROR_RATE:
            return SweepAxis::ErrorRate;
        case QECF_AXIS_TIME_STEP:
            return SweepAxis::TimeStep;
    }
    fail(ErrorKind::InvalidArgument, "unknown sweep axis");
}

template <typename T>
void release(T *p) {
    delete p;
}

}  // namespace

extern "C" {

const char *qecf_version(void) { return "0.1.0"; }

const char *qecf_status_string(qecf_status status) {
    switch (status) {
        case QECF_OK:
            return "ok";
        case QECF_INVALID_ARGUMENT:
            return "invalid argument";
        case QECF_IO:
            return "i/o error";
        case QECF_NUMERIC:
            return "numerical failure";
        case QECF_CONFIG_MISMATCH:
            return "configuration mismatch";
        case QECF_INTERNAL:
            return "internal error";
    }
    return "unknown status";
}

const char *qecf_last_error(void) { return last_error.c_str(); }

void qecf_run_config_default(qecf_run_config *out) {
    if (out == nullptr) {
        return;
    }
    RunConfig d;
    *out = {d.mu, d.T, d.k, d.duration, d.seed, d.trials, d.initial_state};
}

void qecf_threshold_params_default(qecf_threshold_params *out) {
    if (out == nullptr) {
        return;
    }
    ThresholdParams d;
    *out = {d.ema_time_constant, d.eta_low, d.eta_high};
}

void qecf_histogram_options_default(qecf_histogram_options *out) {
    if (out == nullptr) {
        return;
    }
    HistogramOptions d;
    *out = {d.n, d.samples, d.seed, d.tail, nullptr};
}

void qecf_experiment_spec_default(qecf_experiment_spec *out) {
    if (out == nullptr) {
        return;
    }
    std::memset(out, 0, sizeof(*out));
    out->axis = QECF_AXIS_DURATION;
    qecf_run_config_default(&out->fixed);
    out->threads = 1;
    qecf_threshold_params_default(&out->threshold);
    qecf_histogram_options_default(&out->histograms);
}

qecf_status qecf_trajectory_simulate(const qecf_run_config *config, uint64_t trial, qecf_trajectory **out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        auto cfg = to_config(config);
        cfg.validate();
        auto t = std::make_unique<qecf_trajectory>();
        t->record = simulate_trajectory(cfg, trial);
        *out = t.release();
    });
}

size_t qecf_trajectory_length(const qecf_trajectory *trajectory) {
    return trajectory == nullptr ? 0 : trajectory->record.size();
}

qecf_status qecf_trajectory_interval(const qecf_trajectory *trajectory, size_t i, qecf_interval *out) {
    return guarded([&] {
        require(trajectory, "trajectory");
        require(out, "out");
        const auto &r = trajectory->record;
        if (i >= r.size()) {
            fail(ErrorKind::InvalidArgument, "interval index out of range");
        }
        *out = {r.states[i].value(), r.means[i].s1bar, r.means[i].s2bar, r.measurements[i].m1,
                r.measurements[i].m2};
    });
}

size_t qecf_trajectory_event_count(const qecf_trajectory *trajectory) {
    return trajectory == nullptr ? 0 : trajectory->record.events.size();
}

qecf_status qecf_trajectory_event(const qecf_trajectory *trajectory, size_t i, int *qubit, double *time_us) {
    return guarded([&] {
        require(trajectory, "trajectory");
        require(qubit, "qubit");
        require(time_us, "time_us");
        const auto &ev = trajectory->record.events;
        if (i >= ev.size()) {
            fail(ErrorKind::InvalidArgument, "event index out of range");
        }
        *qubit = ev[i].qubit;
        *time_us = ev[i].time;
    });
}

void qecf_trajectory_free(qecf_trajectory *trajectory) { release(trajectory); }

qecf_status qecf_tables_build(const qecf_run_config *config, const qecf_histogram_options *options,
                              unsigned threads, qecf_tables **out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        auto cfg = to_config(config);
        cfg.validate();
        auto h = to_histograms(options);
        int n_max = choose_n_max(cfg.mu_T(), h.tail);
        auto set = HistogramSet::cached(h.cache_dir, h.n, h.samples, h.seed, n_max, threads);
        auto t = std::make_unique<qecf_tables>();
        t->table = std::make_shared<MeasurementDensityTable>(set, cfg.mu, cfg.T, cfg.k, n_max);
        *out = t.release();
    });
}

void qecf_tables_free(qecf_tables *tables) { release(tables); }

qecf_status qecf_filter_create(qecf_filter_kind kind, const qecf_run_config *config, const qecf_tables *tables,
                               const qecf_threshold_params *threshold, qecf_filter **out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        auto cfg = to_config(config);
        cfg.validate();
        const StateIndex initial(cfg.initial_state);
        switch (to_kind(kind)) {
            case FilterKind::Optimal: {
                require(tables, "tables");
                const auto &t = *tables->table;
                if (t.mu() != cfg.mu || t.T() != cfg.T || t.k() != cfg.k) {
                    fail(ErrorKind::ConfigMismatch, "density tables were built for different run parameters");
                }
                *out = new qecf_filter{OptimalFilter(tables->table, initial)};
                break;
            }
            case FilterKind::TwoTerm:
            case FilterKind::OneTerm: {
                LogFilterConfig lc;
                lc.mode = kind == QECF_FILTER_TWO_TERM ? LogMode::TwoTerm : LogMode::OneTerm;
                *out = new qecf_filter{LogFilter(cfg, lc)};
                break;
            }
            case FilterKind::Wonham:
                *out = new qecf_filter{WonhamFilter(cfg)};
                break;
            case FilterKind::Threshold:
                *out = new qecf_filter{ThresholdFilter(cfg, to_threshold(threshold))};
                break;
        }
    });
}

qecf_status qecf_filter_step(qecf_filter *filter, double m1, double m2, int *predicted) {
    return guarded([&] {
        require(filter, "filter");
        MeasurementPair m{m1, m2};
        StateIndex s = std::visit(
            [&](auto &f) {
                if constexpr (std::is_same_v<std::decay_t<decltype(f)>, OptimalFilter>) {
                    return f.update(m);
                } else {
                    return f.step(m);
                }
            },
            filter->f);
        if (predicted != nullptr) {
            *predicted = s.value();
        }
    });
}

qecf_status qecf_filter_state(const qecf_filter *filter, double out[8]) {
    return guarded([&] {
        require(filter, "filter");
        require(out, "out");
        Vector8 v = std::visit(
            [](const auto &f) -> Vector8 {
                using F = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<F, LogFilter>) {
                    return f.state().lp;
                } else if constexpr (std::is_same_v<F, ThresholdFilter>) {
                    Vector8 one{};
                    one[f.predicted().value()] = 1;
                    return one;
                } else {
                    return f.posterior();
                }
            },
            filter->f);
        std::copy(v.begin(), v.end(), out);
    });
}

qecf_status qecf_filter_reset(qecf_filter *filter, int initial_state) {
    return guarded([&] {
        require(filter, "filter");
        StateIndex s(initial_state);
        std::visit([&](auto &f) { f.reset(s); }, filter->f);
    });
}

void qecf_filter_free(qecf_filter *filter) { release(filter); }

qecf_status qecf_experiment_run(const qecf_experiment_spec *spec, qecf_results **out) {
    return guarded([&] {
        require(spec, "spec");
        require(out, "out");
        *out = nullptr;
        ExperimentSpec s;
        s.axis = to_axis(spec->axis);
        if (spec->value_count > 0) {
            require(spec->values, "values");
            s.values.assign(spec->values, spec->values + spec->value_count);
        }
        s.fixed = to_config(&spec->fixed);
        if (spec->filter_count > 0) {
            require(spec->filters, "filters");
            for (size_t i = 0; i < spec->filter_count; i++) {
                s.filters.push_back(to_kind(spec->filters[i]));
            }
        }
        s.threads = spec->threads;
        s.threshold = to_threshold(&spec->threshold);
        s.histograms = to_histograms(&spec->histograms);
        s.per_step_scoring = spec->per_step_scoring != 0;
        auto r = std::make_unique<qecf_results>();
        r->result = run_experiment(s);
        *out = r.release();
    });
}

size_t qecf_results_count(const qecf_results *results) {
    return results == nullptr ? 0 : results->result.rows.size();
}

qecf_status qecf_results_row(const qecf_results *results, size_t i, qecf_result_row *out) {
    return guarded([&] {
        require(results, "results");
        require(out, "out");
        const auto &rows = results->result.rows;
        if (i >= rows.size()) {
            fail(ErrorKind::InvalidArgument, "row index out of range");
        }
        const auto &r = rows[i];
        *out = {r.filter.c_str(), r.axis.c_str(), r.axis_value, r.inaccuracy, r.stderr_, r.trials,
                r.mu,             r.T,            r.k,          r.duration,   r.seed};
    });
}

qecf_status qecf_results_write_csv(const qecf_results *results, const char *path) {
    return guarded([&] {
        require(results, "results");
        require(path, "path");
        write_results_csv(path, results->result.rows);
    });
}

qecf_status qecf_results_write_metadata(const qecf_results *results, const char *path) {
    return guarded([&] {
        require(results, "results");
        require(path, "path");
        write_results_metadata(path, results->result);
    });
}

void qecf_results_free(qecf_results *results) { release(results); }

qecf_status qecf_simulate_dump(const qecf_run_config *config, uint32_t trials, const char *intervals_path,
                               const char *events_path) {
    return guarded([&] {
        require(intervals_path, "intervals_path");
        require(events_path, "events_path");
        if (trials == 0) {
            fail(ErrorKind::InvalidArgument, "trials must be positive");
        }
        dump_trajectories(to_config(config), trials, intervals_path, events_path);
    });
}

qecf_status qecf_diagnostics_run(const qecf_run_config *config, uint32_t trials, const int *flip_qubits,
                                 const double *flip_times_us, size_t flip_count, int one_term, unsigned threads,
                                 const char *out_prefix) {
    return guarded([&] {
        require(out_prefix, "out_prefix");
        DiagnosticsOptions opt;
        opt.mode = one_term != 0 ? LogMode::OneTerm : LogMode::TwoTerm;
        if (flip_count > 0) {
            require(flip_qubits, "flip_qubits");
            require(flip_times_us, "flip_times_us");
            opt.use_schedule = true;
            for (size_t i = 0; i < flip_count; i++) {
                opt.schedule.push_back({flip_qubits[i], flip_times_us[i]});
            }
        }
        auto r = diagnostics_run(to_config(config), trials, opt, threads);
        write_diagnostics(out_prefix, r);
    });
}

qecf_status qecf_build_tables(const qecf_histogram_options *options, int n_max, unsigned threads, char *path_out,
                              size_t path_capacity) {
    return guarded([&] {
        require(options, "options");
        auto h = to_histograms(options);
        if (h.cache_dir.empty()) {
            fail(ErrorKind::InvalidArgument, "build_tables needs a cache directory");
        }
        if (n_max < 0) {
            fail(ErrorKind::InvalidArgument, "n_max must be non-negative");
        }
        HistogramSet::cached(h.cache_dir, h.n, h.samples, h.seed, n_max, threads);
        if (path_out != nullptr && path_capacity > 0) {
            std::string p = h.cache_dir + "/" + HistogramSet::cache_file_name(h.n, h.samples, h.seed);
            std::snprintf(path_out, path_capacity, "%s", p.c_str());
        }
    });
}

int qecf_choose_n_max(double mu_T, double tail) {
    try {
        return choose_n_max(mu_T, tail);
    } catch (const std::exception &e) {
        last_error = e.what();
        return -1;
    }
}

}  // extern "C"
