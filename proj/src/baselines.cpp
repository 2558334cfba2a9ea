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

#include "qecfilter/baselines.hpp"

#include <cmath>

namespace qecf {

StateIndex wonham_step(WonhamState &state, const MeasurementPair &m, const RateMatrix &q, double k, double T,
                       bool normalize, WonhamNegative negative) {
    const auto &p = state.p;
    Vector8 next;
    double total = 0;
    for (int b = 0; b < 8; b++) {
        double drift = 0;
        for (int a = 0; a < 8; a++) {
            drift += p[a] * q.q[a][b];
        }
        auto s = syndrome_of(StateIndex(b));
        double meas = (m.m1 * s.s1 + m.m2 * s.s2) / k * p[b];
        double v = p[b] + T * (drift + meas);
        if (v < 0) {
            v = negative == WonhamNegative::Reflect ? -v : 0.0;
        }
        next[b] = v;
        total += next[b];
    }
    if (!(total > 0) || !std::isfinite(total)) {
        fail(ErrorKind::Numeric, "linearized Wonham filter diverged (all probabilities zero)");
    }
    if (normalize) {
        for (double &v : next) {
            v /= total;
        }
    }
    state.p = next;
    return argmax_state(state.p);
}

WonhamFilter::WonhamFilter(const RunConfig &run, bool normalize, WonhamNegative negative)
    : q_(rate_matrix(run.mu)), k_(run.k), T_(run.T), normalize_(normalize), negative_(negative) {
    run.validate();
    reset(StateIndex(run.initial_state));
}

void WonhamFilter::reset(StateIndex initial) {
    state_.p.fill(0);
    state_.p[initial.value()] = 1;
}

void ThresholdParams::validate() const {
    if (!(ema_time_constant > 0)) {
        fail(ErrorKind::InvalidArgument, "threshold time constant must be positive");
    }
    if (!(eta_low < eta_high)) {
        fail(ErrorKind::InvalidArgument, "threshold eta_low must be below eta_high");
    }
}

ThresholdFilter::ThresholdFilter(const RunConfig &run, ThresholdParams params) {
    run.validate();
    params.validate();
    lambda_ = -std::expm1(-run.T / params.ema_time_constant);
    state_.params = params;
    reset(StateIndex(run.initial_state));
}

void ThresholdFilter::reset(StateIndex initial) {
    auto s = syndrome_of(initial);
    state_.ema1 = s.s1;
    state_.ema2 = s.s2;
    state_.believed = initial;
}

StateIndex ThresholdFilter::step(const MeasurementPair &m) { return threshold_step(state_, m, lambda_); }

StateIndex threshold_step(ThresholdState &state, const MeasurementPair &m, double lambda) {
    state.ema1 += lambda * (m.m1 - state.ema1);
    state.ema2 += lambda * (m.m2 - state.ema2);
    auto s = syndrome_of(state.believed);
    const double z1 = s.s1 * state.ema1;
    const double z2 = s.s2 * state.ema2;
    const double lo = state.params.eta_low;
    const double hi = state.params.eta_high;
    int flip = 0;
    if (z1 < lo && z2 < lo) {
        flip = 2;
    } else if (z1 < lo && z2 > hi) {
        flip = 1;
    } else if (z1 > hi && z2 < lo) {
        flip = 3;
    }
    if (flip != 0) {
        state.believed = state.believed.flipped(qubit_mask(flip));
    }
    return state.believed;
}

}  // namespace qecf
