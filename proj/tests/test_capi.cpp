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

// Exercises the shared library through its C interface only.

#include <gtest/gtest.h>

#include <unistd.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "qecfilter/qecf.h"

namespace {

std::string scratch(const std::string &name) {
    auto dir = std::filesystem::temp_directory_path() / ("qecf_capi_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

std::string first_line(const std::string &path) {
    std::ifstream is(path);
    std::string line;
    std::getline(is, line);
    return line;
}

}  // namespace

TEST(CApi, VersionAndStatusStrings) {
    EXPECT_GT(std::strlen(qecf_version()), 0u);
    EXPECT_STREQ(qecf_status_string(QECF_OK), "ok");
    EXPECT_NE(std::string(qecf_status_string(QECF_INVALID_ARGUMENT)), "ok");
}

TEST(CApi, Defaults) {
    qecf_run_config c;
    qecf_run_config_default(&c);
    EXPECT_EQ(c.mu, 2.5e-3);
    EXPECT_EQ(c.T, 0.1);
    EXPECT_EQ(c.k, 0.5);
    EXPECT_EQ(c.duration, 100.0);
    EXPECT_EQ(c.trials, 10000u);
    qecf_threshold_params t;
    qecf_threshold_params_default(&t);
    EXPECT_EQ(t.ema_time_constant, 1.0);
    EXPECT_EQ(t.eta_low, 0.0);
    EXPECT_EQ(t.eta_high, 0.5);
}

TEST(CApi, TrajectoryAccess) {
    qecf_run_config c;
    qecf_run_config_default(&c);
    c.mu = 0.2;
    c.duration = 10;
    qecf_trajectory *t = nullptr;
    ASSERT_EQ(qecf_trajectory_simulate(&c, 0, &t), QECF_OK);
    ASSERT_EQ(qecf_trajectory_length(t), 100u);
    qecf_interval iv;
    ASSERT_EQ(qecf_trajectory_interval(t, 99, &iv), QECF_OK);
    EXPECT_GE(iv.true_state, 0);
    EXPECT_LT(iv.true_state, 8);
    EXPECT_LE(std::abs(iv.s1bar), 1.0);
    EXPECT_EQ(qecf_trajectory_interval(t, 100, &iv), QECF_INVALID_ARGUMENT);
    size_t n = qecf_trajectory_event_count(t);
    for (size_t i = 0; i < n; i++) {
        int q;
        double time;
        ASSERT_EQ(qecf_trajectory_event(t, i, &q, &time), QECF_OK);
        EXPECT_GE(q, 1);
        EXPECT_LE(q, 3);
    }
    qecf_trajectory_free(t);
}

TEST(CApi, InvalidArgumentsSetLastError) {
    qecf_run_config c;
    qecf_run_config_default(&c);
    c.T = -1;
    qecf_trajectory *t = nullptr;
    EXPECT_EQ(qecf_trajectory_simulate(&c, 0, &t), QECF_INVALID_ARGUMENT);
    EXPECT_EQ(t, nullptr);
    EXPECT_GT(std::strlen(qecf_last_error()), 0u);
    EXPECT_EQ(qecf_trajectory_simulate(nullptr, 0, &t), QECF_INVALID_ARGUMENT);
    qecf_filter *f = nullptr;
    qecf_run_config_default(&c);
    EXPECT_NE(qecf_filter_create(QECF_FILTER_OPTIMAL, &c, nullptr, nullptr, &f), QECF_OK);
    // Free functions accept null.
    qecf_trajectory_free(nullptr);
    qecf_filter_free(nullptr);
    qecf_results_free(nullptr);
    qecf_tables_free(nullptr);
}

TEST(CApi, FiltersTrackAnInjectedFlip) {
    qecf_run_config c;
    qecf_run_config_default(&c);
    c.k = 0.05;
    qecf_histogram_options h;
    qecf_histogram_options_default(&h);
    h.samples = 20000;
    h.n = 10;
    qecf_tables *tables = nullptr;
    ASSERT_EQ(qecf_tables_build(&c, &h, 1, &tables), QECF_OK);
    for (auto kind : {QECF_FILTER_OPTIMAL, QECF_FILTER_TWO_TERM, QECF_FILTER_ONE_TERM, QECF_FILTER_WONHAM,
                      QECF_FILTER_THRESHOLD}) {
        qecf_filter *f = nullptr;
        ASSERT_EQ(qecf_filter_create(kind, &c, tables, nullptr, &f), QECF_OK);
        int pred = -1;
        for (int i = 0; i < 20; i++) {
            ASSERT_EQ(qecf_filter_step(f, 1, 1, &pred), QECF_OK);
        }
        EXPECT_EQ(pred, 0);
        for (int i = 0; i < 40; i++) {
            ASSERT_EQ(qecf_filter_step(f, -1, 1, &pred), QECF_OK);
        }
        EXPECT_EQ(pred, 4) << "filter " << kind;
        double state[8];
        EXPECT_EQ(qecf_filter_state(f, state), QECF_OK);
        ASSERT_EQ(qecf_filter_reset(f, 0), QECF_OK);
        EXPECT_EQ(qecf_filter_reset(f, 8), QECF_INVALID_ARGUMENT);
        qecf_filter_free(f);
    }
    qecf_tables_free(tables);
}

TEST(CApi, ExperimentAndOutputs) {
    qecf_experiment_spec s;
    qecf_experiment_spec_default(&s);
    double values[] = {1, 2};
    qecf_filter_kind kinds[] = {QECF_FILTER_WONHAM, QECF_FILTER_TWO_TERM};
    s.values = values;
    s.value_count = 2;
    s.filters = kinds;
    s.filter_count = 2;
    s.fixed.trials = 50;
    qecf_results *r = nullptr;
    ASSERT_EQ(qecf_experiment_run(&s, &r), QECF_OK);
    ASSERT_EQ(qecf_results_count(r), 4u);
    qecf_result_row row;
    ASSERT_EQ(qecf_results_row(r, 0, &row), QECF_OK);
    EXPECT_STREQ(row.filter, "wonham");
    EXPECT_STREQ(row.axis, "duration");
    EXPECT_EQ(row.trials, 50u);
    EXPECT_EQ(qecf_results_row(r, 4, &row), QECF_INVALID_ARGUMENT);
    auto csv = scratch("r.csv");
    ASSERT_EQ(qecf_results_write_csv(r, csv.c_str()), QECF_OK);
    EXPECT_EQ(first_line(csv), "filter,axis,axis_value,inaccuracy,stderr,trials,mu,T,k,duration,seed");
    ASSERT_EQ(qecf_results_write_metadata(r, scratch("r.json").c_str()), QECF_OK);
    EXPECT_EQ(qecf_results_write_csv(r, "/nonexistent/dir/r.csv"), QECF_IO);
    qecf_results_free(r);

    s.value_count = 0;
    EXPECT_EQ(qecf_experiment_run(&s, &r), QECF_INVALID_ARGUMENT);
}

TEST(CApi, DumpDiagnosticsAndTables) {
    qecf_run_config c;
    qecf_run_config_default(&c);
    c.duration = 2;
    auto iv = scratch("iv.csv"), ev = scratch("ev.csv");
    ASSERT_EQ(qecf_simulate_dump(&c, 2, iv.c_str(), ev.c_str()), QECF_OK);
    EXPECT_EQ(first_line(iv), "trial,i,true_state,s1bar,s2bar,m1,m2");
    EXPECT_EQ(first_line(ev), "trial,qubit,time_us");

    int q = 3;
    double at = 1.0;
    auto prefix = scratch("diag");
    ASSERT_EQ(qecf_diagnostics_run(&c, 4, &q, &at, 1, 0, 1, prefix.c_str()), QECF_OK);
    EXPECT_TRUE(std::filesystem::exists(prefix + "_norms.csv"));

    qecf_histogram_options h;
    qecf_histogram_options_default(&h);
    h.samples = 10000;
    h.n = 8;
    auto dir = scratch("cache");
    h.cache_dir = dir.c_str();
    char path[4096];
    ASSERT_EQ(qecf_build_tables(&h, 3, 1, path, sizeof(path)), QECF_OK);
    EXPECT_TRUE(std::filesystem::exists(path));
    EXPECT_EQ(qecf_choose_n_max(2.5e-4, 1e-6), 3);
    EXPECT_LT(qecf_choose_n_max(-1, 1e-6), 0);
}
