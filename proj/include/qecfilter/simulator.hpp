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

#ifndef QECFILTER_SIMULATOR_HPP
#define QECFILTER_SIMULATOR_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "qecfilter/core.hpp"
#include "qecfilter/rng.hpp"

namespace qecf {

struct ErrorEvent {
    int qubit = 1;
    double time = 0;  // us since the start of the run
};

struct ErrorCounts {
    int e1 = 0;
    int e2 = 0;
    int e3 = 0;
    int total() const noexcept { return e1 + e2 + e3; }
    int operator[](int qubit) const noexcept { return qubit == 1 ? e1 : (qubit == 2 ? e2 : e3); }
    /// Net flip mask implied by the count parities.
    int flip_mask() const noexcept {
        return ((e1 & 1) ? qubit_mask(1) : 0) | ((e2 & 1) ? qubit_mask(2) : 0) | ((e3 & 1) ? qubit_mask(3) : 0);
    }
    friend bool operator==(const ErrorCounts &, const ErrorCounts &) = default;
};

/// Time-averaged syndromes over one integration interval, each in [-1, 1].
struct SyndromeMeans {
    double s1bar = 1;
    double s2bar = 1;
};

struct MeasurementPair {
    double m1 = 0;
    double m2 = 0;
};

struct TrajectoryRecord {
    RunConfig config;
    std::vector<StateIndex> states;  // state at the end of interval i
    std::vector<SyndromeMeans> means;
    std::vector<MeasurementPair> measurements;
    std::vector<ErrorEvent> events;

    size_t size() const noexcept { return states.size(); }
};

/// Independent Poisson(mu*T) error counts for the three qubits.
ErrorCounts sample_error_counts(double mu, double T, Rng &rng);

/// Syndrome means for one interval starting in `start`, given the sorted
/// error times of each qubit normalized to [0, 1].
SyndromeMeans syndrome_means(StateIndex start, std::span<const double> times_q1, std::span<const double> times_q2,
                             std::span<const double> times_q3);

MeasurementPair measure(const SyndromeMeans &means, double variance, Rng &rng);

/// One simulated integration interval.
struct Interval {
    StateIndex start;
    StateIndex end;
    ErrorCounts counts;
    SyndromeMeans means;
    MeasurementPair measurement;
};

/// A flip forced at a fixed time; used by diagnostics in place of random errors.
struct ScheduledFlip {
    int qubit = 3;
    double time = 7.5;
};

/// Interval-by-interval trajectory generator ("jump, no-jump" per interval).
///
/// Error counts are Poisson per qubit, error times uniform inside the interval,
/// and measurements add N(0, k/T) noise to the syndrome means. With a schedule
/// the random error process is replaced by the given flips.
class TrajectoryStream {
   public:
    TrajectoryStream(const RunConfig &config, Rng rng);
    TrajectoryStream(const RunConfig &config, std::vector<ScheduledFlip> schedule, Rng rng);

    uint64_t steps() const noexcept { return steps_; }
    uint64_t position() const noexcept { return index_; }
    bool done() const noexcept { return index_ >= steps_; }
    StateIndex state() const noexcept { return state_; }

    /// Advances one interval. `events`, when non-null, receives the error times.
    Interval next(std::vector<ErrorEvent> *events = nullptr);

   private:
    ErrorCounts draw_counts();

    RunConfig config_;
    Rng rng_;
    std::vector<ScheduledFlip> schedule_;
    bool scheduled_ = false;
    uint64_t steps_ = 0;
    uint64_t index_ = 0;
    StateIndex state_;
    double sd_ = 0;
    double p_none_ = 1;
    std::array<std::vector<double>, 3> times_;
};

TrajectoryRecord simulate_trajectory(const RunConfig &config, Rng rng);
/// Uses the per-trial stream derived from (config.seed, trial).
TrajectoryRecord simulate_trajectory(const RunConfig &config, uint64_t trial);

Rng trajectory_rng(uint64_t seed, uint64_t trial, uint64_t axis_index = 0);

}  // namespace qecf

#endif
