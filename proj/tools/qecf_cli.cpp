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

// Command line front end. Talks to the library only through the C interface.

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qecfilter/qecf.h"

namespace {

struct Common {
    qecf_run_config run{};
    unsigned threads = 1;
    std::string out;
};

void add_run_flags(CLI::App *app, Common &c) {
    app->add_option("--mu", c.run.mu, "Error rate per qubit (1/us)")->capture_default_str();
    app->add_option("--dt", c.run.T, "Integration interval T (us)")->capture_default_str();
    app->add_option("--k", c.run.k, "Noise constant k (us); readout variance is k/T")->capture_default_str();
    app->add_option("--duration", c.run.duration, "Run length (us)")->capture_default_str();
    app->add_option("--trials", c.run.trials, "Number of trajectories")->capture_default_str();
    app->add_option("--seed", c.run.seed, "Random seed")->capture_default_str();
    app->add_option("--threads", c.threads, "Worker threads")->capture_default_str();
}

int check(qecf_status s) {
    if (s != QECF_OK) {
        std::fprintf(stderr, "qecf: %s: %s\n", qecf_status_string(s), qecf_last_error());
        return static_cast<int>(s) + 1;
    }
    return 0;
}

std::vector<double> parse_values(const std::string &list) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(std::stod(item));
        }
    }
    return out;
}

bool parse_filters(const std::string &list, std::vector<qecf_filter_kind> &out) {
    static const std::pair<const char *, qecf_filter_kind> kNames[] = {
        {"optimal", QECF_FILTER_OPTIMAL}, {"two_term", QECF_FILTER_TWO_TERM}, {"one_term", QECF_FILTER_ONE_TERM},
        {"wonham", QECF_FILTER_WONHAM},   {"threshold", QECF_FILTER_THRESHOLD},
    };
    if (list == "all") {
        for (const auto &[name, kind] : kNames) {
            out.push_back(kind);
        }
        return true;
    }
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        bool found = false;
        for (const auto &[name, kind] : kNames) {
            if (item == name) {
                out.push_back(kind);
                found = true;
            }
        }
        if (!found) {
            std::fprintf(stderr, "qecf: unknown filter '%s'\n", item.c_str());
            return false;
        }
    }
    return !out.empty();
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Error tracking filters for the three-qubit bit-flip code"};
    app.require_subcommand(1);

    Common common;
    qecf_run_config_default(&common.run);
    qecf_histogram_options hist;
    qecf_histogram_options_default(&hist);
    qecf_threshold_params thr;
    qecf_threshold_params_default(&thr);
    std::string cache_dir;

    auto add_hist_flags = [&](CLI::App *sub) {
        sub->add_option("--hist-n", hist.n, "Histogram half-resolution (2n bins per axis)")->capture_default_str();
        sub->add_option("--hist-samples", hist.samples, "Monte Carlo samples per error signature")
            ->capture_default_str();
        sub->add_option("--hist-seed", hist.seed, "Seed of the histogram streams")->capture_default_str();
        sub->add_option("--cache-dir", cache_dir, "Directory for the histogram cache");
    };

    auto *sim = app.add_subcommand("simulate", "Dump simulated trajectories as CSV");
    add_run_flags(sim, common);
    sim->add_option("--out", common.out, "Output prefix: <out>_intervals.csv and <out>_events.csv")->required();

    auto *bench = app.add_subcommand("bench", "Run a parameter sweep over the selected filters");
    add_run_flags(bench, common);
    std::string filters = "all";
    std::string sweep = "duration";
    std::string values;
    bool per_step = false;
    bench->add_option("--filters", filters, "Comma list of optimal,two_term,one_term,wonham,threshold or all")
        ->capture_default_str();
    bench->add_option("--sweep", sweep, "Sweep axis: duration, error_rate or time_step")
        ->check(CLI::IsMember({"duration", "error_rate", "time_step"}))
        ->capture_default_str();
    bench->add_option("--values", values, "Comma list of axis values")->required();
    bench->add_option("--out", common.out, "Results CSV; metadata goes to <out>.meta.json")->required();
    bench->add_option("--tau", thr.ema_time_constant, "Threshold filter EMA time constant (us)")
        ->capture_default_str();
    bench->add_option("--eta-low", thr.eta_low, "Threshold filter lower threshold")->capture_default_str();
    bench->add_option("--eta-high", thr.eta_high, "Threshold filter upper threshold")->capture_default_str();
    bench->add_flag("--per-step", per_step, "Average the score over every step instead of the last one");
    add_hist_flags(bench);

    auto *diag = app.add_subcommand("diagnostics", "Averaged L-terms, log posteriors and norm traces");
    add_run_flags(diag, common);
    std::vector<std::string> flips;
    bool one_term = false;
    diag->add_option("--flip", flips, "Scheduled flip as qubit@time_us, e.g. 3@7.5 (repeatable)");
    diag->add_flag("--one-term", one_term, "Trace the one-term filter instead of the two-term one");
    diag->add_option("--out", common.out, "Output prefix for the diagnostics CSV files")->required();

    auto *tables = app.add_subcommand("build-tables", "Build the histogram cache used by the optimal filter");
    add_run_flags(tables, common);
    int n_max = -1;
    tables->add_option("--n-max", n_max, "Largest error count per interval (default: from --mu and --dt)");
    add_hist_flags(tables);
    tables->add_option("--out", cache_dir, "Cache directory (same as --cache-dir)");

    CLI11_PARSE(app, argc, argv);
    hist.cache_dir = cache_dir.empty() ? nullptr : cache_dir.c_str();

    if (sim->parsed()) {
        std::string iv = common.out + "_intervals.csv";
        std::string ev = common.out + "_events.csv";
        return check(qecf_simulate_dump(&common.run, common.run.trials, iv.c_str(), ev.c_str()));
    }

    if (bench->parsed()) {
        qecf_experiment_spec spec;
        qecf_experiment_spec_default(&spec);
        std::vector<double> vals;
        try {
            vals = parse_values(values);
        } catch (const std::exception &) {
            std::fprintf(stderr, "qecf: bad --values list '%s'\n", values.c_str());
            return 2;
        }
        std::vector<qecf_filter_kind> kinds;
        if (!parse_filters(filters, kinds)) {
            return 2;
        }
        spec.axis = sweep == "duration" ? QECF_AXIS_DURATION
                                        : (sweep == "error_rate" ? QECF_AXIS_ERROR_RATE : QECF_AXIS_TIME_STEP);
        spec.values = vals.data();
        spec.value_count = vals.size();
        spec.fixed = common.run;
        spec.filters = kinds.data();
        spec.filter_count = kinds.size();
        spec.threads = common.threads;
        spec.threshold = thr;
        spec.histograms = hist;
        spec.per_step_scoring = per_step ? 1 : 0;
        qecf_results *res = nullptr;
        if (int rc = check(qecf_experiment_run(&spec, &res))) {
            return rc;
        }
        std::string meta = common.out + ".meta.json";
        int rc = check(qecf_results_write_csv(res, common.out.c_str()));
        if (rc == 0) {
            rc = check(qecf_results_write_metadata(res, meta.c_str()));
        }
        for (size_t i = 0; rc == 0 && i < qecf_results_count(res); i++) {
            qecf_result_row row;
            qecf_results_row(res, i, &row);
            std::printf("%-10s %s=%-10g inaccuracy=%.5f se=%.5f\n", row.filter, row.axis, row.axis_value,
                        row.inaccuracy, row.stderr_);
        }
        qecf_results_free(res);
        return rc;
    }

    if (diag->parsed()) {
        std::vector<int> qubits;
        std::vector<double> times;
        for (const auto &f : flips) {
            auto at = f.find('@');
            try {
                if (at == std::string::npos) {
                    throw std::invalid_argument(f);
                }
                qubits.push_back(std::stoi(f.substr(0, at)));
                times.push_back(std::stod(f.substr(at + 1)));
            } catch (const std::exception &) {
                std::fprintf(stderr, "qecf: bad --flip '%s', expected qubit@time_us\n", f.c_str());
                return 2;
            }
        }
        return check(qecf_diagnostics_run(&common.run, common.run.trials, qubits.data(), times.data(), qubits.size(),
                                          one_term ? 1 : 0, common.threads, common.out.c_str()));
    }

    if (tables->parsed()) {
        if (n_max < 0) {
            n_max = qecf_choose_n_max(common.run.mu * common.run.T, hist.tail);
            if (n_max < 0) {
                return check(QECF_INVALID_ARGUMENT);
            }
        }
        char path[4096];
        if (int rc = check(qecf_build_tables(&hist, n_max, common.threads, path, sizeof(path)))) {
            return rc;
        }
        std::printf("%s (n_max=%d)\n", path, n_max);
        return 0;
    }
    return 0;
}
