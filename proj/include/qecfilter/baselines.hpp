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

#ifndef QECFILTER_BASELINES_HPP
#define QECFILTER_BASELINES_HPP

#include "qecfilter/core.hpp"
#include "qecfilter/markov.hpp"
#include "qecfilter/simulator.hpp"

namespace qecf {

struct WonhamState {
    Vector8 p{};
};

/// What to do with entries the first-order update drives below zero.
enum class WonhamNegative {
    /// Keep the magnitude. A negative factor 1 + T (m . S)/k hits a whole
    /// syndrome class at once, so this acts like the sign-agnostic
    /// normalization of the plain linear recursion.
    Reflect,
    /// Set to zero. The class then only recovers through the mu*T leakage.
    Clamp,
};

/// One first-order Wonham update, p + T (p Q + (m . S) / k p), with negative
/// entries handled per `negative`. Normalizes unless `normalize` is false.
/// Fails if every entry ends up zero.
StateIndex wonham_step(WonhamState &state, const MeasurementPair &m, const RateMatrix &q, double k, double T,
                       bool normalize = true, WonhamNegative negative = WonhamNegative::Reflect);

/// Linearized Wonham filter, normalized every step by default.
class WonhamFilter {
   public:
    explicit WonhamFilter(const RunConfig &run, bool normalize = true,
                          WonhamNegative negative = WonhamNegative::Reflect);

    void reset(StateIndex initial);
    StateIndex step(const MeasurementPair &m) { return wonham_step(state_, m, q_, k_, T_, normalize_, negative_); }
    const Vector8 &posterior() const noexcept { return state_.p; }
    StateIndex predicted() const noexcept { return argmax_state(state_.p); }

   private:
    RateMatrix q_;
    double k_;
    double T_;
    bool normalize_;
    WonhamNegative negative_;
    WonhamState state_;
};

struct ThresholdParams {
    double ema_time_constant = 1.0;  // us
    double eta_low = 0.0;
    double eta_high = 0.5;

    void validate() const;
};

struct ThresholdState {
    double ema1 = 1;
    double ema2 = 1;
    StateIndex believed;
    ThresholdParams params;
};

/// Double-threshold detector on exponentially averaged readouts.
///
/// Each average is read in the frame of the believed state's syndrome, so it
/// sits near +1 while the belief is right. A syndrome counts as flipped below
/// eta_low and as intact above eta_high. Flipped/intact patterns map to a
/// correction on qubit 1, 3, or 2 (both flipped); anything in between waits.
class ThresholdFilter {
   public:
    ThresholdFilter(const RunConfig &run, ThresholdParams params = {});

    void reset(StateIndex initial);
    StateIndex step(const MeasurementPair &m);
    const ThresholdState &state() const noexcept { return state_; }
    StateIndex predicted() const noexcept { return state_.believed; }
    /// Weight of the newest sample, 1 - exp(-T/tau).
    double lambda() const noexcept { return lambda_; }

   private:
    double lambda_;
    ThresholdState state_;
};

StateIndex threshold_step(ThresholdState &state, const MeasurementPair &m, double lambda);

}  // namespace qecf

#endif
