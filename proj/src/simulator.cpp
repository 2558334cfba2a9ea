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

#include "qecfilter/simulator.hpp"

#include <algorithm>
#include <cmath>

namespace qecf {

namespace {

void check_sorted_unit(std::span<const double> times) {
    for (size_t i = 0; i < times.size(); i++) {
        if (!(times[i] >= 0 && times[i] <= 1)) {
            fail(ErrorKind::InvalidArgument, "error times must lie in [0, 1]");
        }
        if (i > 0 && times[i] < times[i - 1]) {
            fail(ErrorKind::InvalidArgument, "error times must be sorted ascending");
        }
    }
}

// sign * ((-1)^N + 2 * sum_j (-1)^(j-1) x_j) over the merged, sorted times.
double alternating_mean(int start_sign, std::span<const double> a, std::span<const double> b) {
    size_t i = 0;
    size_t j = 0;
    double acc = 0;
    double sign = 1;
    while (i < a.size() || j < b.size()) {
        double x;
        if (j >= b.size() || (i < a.size() && a[i] <= b[j])) {
            x = a[i++];
        } else {
            x = b[j++];
        }
        acc += sign * x;
        sign = -sign;
    }
    // After N flips `sign` equals (-1)^N.
    return start_sign * (sign + 2 * acc);
}

ErrorCounts split_total(int total, Rng &rng) {
    ErrorCounts c;
    for (int n = 0; n < total; n++) {
        uint64_t r = rng.next_u64() % 3;
        (r == 0 ? c.e1 : (r == 1 ? c.e2 : c.e3))++;
    }
    return c;
}

// Inverse-CDF draw of Poisson(lambda) given u, with p_zero = exp(-lambda).
int poisson_from_uniform(double u, double lambda, double p_zero) {
    int n = 0;
    double term = p_zero;
    double cdf = p_zero;
    while (u >= cdf) {
        n++;
        term *= lambda / n;
        if (term == 0) {
            break;
        }
        cdf += term;
    }
    return n;
}

}  // namespace

ErrorCounts sample_error_counts(double mu, double T, Rng &rng) {
    if (!(mu >= 0) || !(T >= 0)) {
        fail(ErrorKind::InvalidArgument, "mu and T must be non-negative");
    }
    double lambda = 3 * mu * T;
    if (lambda == 0) {
        return {};
    }
    // The total of three iid Poisson(mu T) counts is Poisson(3 mu T); given the
    // total, each error lands on a uniformly chosen qubit.
    double p_zero = std::exp(-lambda);
    double u = rng.uniform();
    if (u < p_zero) {
        return {};
    }
    return split_total(poisson_from_uniform(u, lambda, p_zero), rng);
}

SyndromeMeans syndrome_means(StateIndex start, std::span<const double> times_q1, std::span<const double> times_q2,
                             std::span<const double> times_q3) {
    check_sorted_unit(times_q1);
    check_sorted_unit(times_q2);
    check_sorted_unit(times_q3);
    auto s = syndrome_of(start);
    return {alternating_mean(s.s1, times_q1, times_q2), alternating_mean(s.s2, times_q2, times_q3)};
}

MeasurementPair measure(const SyndromeMeans &means, double variance, Rng &rng) {
    double sd = std::sqrt(variance);
    return {rng.normal(means.s1bar, sd), rng.normal(means.s2bar, sd)};
}

Rng trajectory_rng(uint64_t seed, uint64_t trial, uint64_t axis_index) {
    return Rng(seed, StreamTag::Trajectory, {axis_index, trial});
}

TrajectoryStream::TrajectoryStream(const RunConfig &config, Rng rng)
    : config_(config), rng_(std::move(rng)), state_(config.initial_state) {
    config_.validate();
    steps_ = config_.steps();
    sd_ = std::sqrt(config_.variance());
    p_none_ = std::exp(-3 * config_.mu_T());
}

TrajectoryStream::TrajectoryStream(const RunConfig &config, std::vector<ScheduledFlip> schedule, Rng rng)
    : TrajectoryStream(config, std::move(rng)) {
    for (const auto &f : schedule) {
        if (f.qubit < 1 || f.qubit > 3) {
            fail(ErrorKind::InvalidArgument, "scheduled flip qubit must be 1, 2 or 3");
        }
        if (!(f.time >= 0)) {
            fail(ErrorKind::InvalidArgument, "scheduled flip time must be non-negative");
        }
    }
    std::sort(schedule.begin(), schedule.end(), [](const auto &a, const auto &b) { return a.time < b.time; });
    schedule_ = std::move(schedule);
    scheduled_ = true;
}

ErrorCounts TrajectoryStream::draw_counts() {
    double u = rng_.uniform();
    if (u < p_none_) {
        return {};
    }
    return split_total(poisson_from_uniform(u, 3 * config_.mu_T(), p_none_), rng_);
}

Interval TrajectoryStream::next(std::vector<ErrorEvent> *events) {
    if (done()) {
        fail(ErrorKind::InvalidArgument, "trajectory stream exhausted");
    }
    const double T = config_.T;
    const double t0 = static_cast<double>(index_) * T;
    for (auto &t : times_) {
        t.clear();
    }
    Interval out;
    out.start = state_;
    if (scheduled_) {
        const double t1 = static_cast<double>(index_ + 1) * T;
        for (const auto &f : schedule_) {
            if (f.time >= t0 && f.time < t1) {
                times_[f.qubit - 1].push_back(std::clamp((f.time - t0) / T, 0.0, 1.0));
            }
        }
        out.counts = {static_cast<int>(times_[0].size()), static_cast<int>(times_[1].size()),
                      static_cast<int>(times_[2].size())};
    } else {
        out.counts = draw_counts();
        for (int q = 0; q < 3; q++) {
            int n = out.counts[q + 1];
            for (int e = 0; e < n; e++) {
                times_[q].push_back(rng_.uniform());
            }
            std::sort(times_[q].begin(), times_[q].end());
        }
    }
    if (out.counts.total() == 0) {
        auto s = syndrome_of(state_);
        out.means = {static_cast<double>(s.s1), static_cast<double>(s.s2)};
    } else {
        out.means = syndrome_means(state_, times_[0], times_[1], times_[2]);
        if (events != nullptr) {
            for (int q = 0; q < 3; q++) {
                for (double x : times_[q]) {
                    events->push_back({q + 1, t0 + x * T});
                }
            }
        }
    }
    state_ = state_.flipped(out.counts.flip_mask());
    out.end = state_;
    out.measurement = {rng_.normal(out.means.s1bar, sd_), rng_.normal(out.means.s2bar, sd_)};
    index_++;
    return out;
}

TrajectoryRecord simulate_trajectory(const RunConfig &config, Rng rng) {
    TrajectoryStream stream(config, std::move(rng));
    TrajectoryRecord rec;
    rec.config = config;
    rec.states.reserve(stream.steps());
    rec.means.reserve(stream.steps());
    rec.measurements.reserve(stream.steps());
    while (!stream.done()) {
        auto iv = stream.next(&rec.events);
        rec.states.push_back(iv.end);
        rec.means.push_back(iv.means);
        rec.measurements.push_back(iv.measurement);
    }
    return rec;
}

TrajectoryRecord simulate_trajectory(const RunConfig &config, uint64_t trial) {
    Rng rng = trajectory_rng(config.seed, trial);
    return simulate_trajectory(config, std::move(rng));
}

}  // namespace qecf
