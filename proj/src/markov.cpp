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

#include "qecfilter/markov.hpp"

#include <cmath>

namespace qecf {

ParityProbs parity_probs(double mu_T) {
    if (!(mu_T >= 0) || !std::isfinite(mu_T)) {
        fail(ErrorKind::InvalidArgument, "mu*T must be non-negative");
    }
    // e^{-x} sinh(x) = (1 - e^{-2x}) / 2, written to keep precision for tiny x.
    double odd = -0.5 * std::expm1(-2 * mu_T);
    return {1 - odd, odd};
}

double log_sinh(double x) {
    if (!(x > 0)) {
        fail(ErrorKind::InvalidArgument, "log_sinh needs a positive argument");
    }
    if (x < 1e-2) {
        double x2 = x * x;
        return std::log(x) + std::log1p(x2 / 6 + x2 * x2 / 120 + x2 * x2 * x2 / 5040);
    }
    if (x > 20) {
        return x - std::log(2.0) + std::log1p(-std::exp(-2 * x));
    }
    return std::log(std::sinh(x));
}

double log_cosh(double x) {
    x = std::fabs(x);
    if (x < 1e-2) {
        double x2 = x * x;
        return x2 / 2 - x2 * x2 / 12 + x2 * x2 * x2 / 45;
    }
    return x + std::log1p(std::exp(-2 * x)) - std::log(2.0);
}

namespace {

void check_rate_and_step(double mu, double T) {
    if (!(mu > 0) || !std::isfinite(mu)) {
        fail(ErrorKind::InvalidArgument, "mu must be positive");
    }
    if (!(T > 0) || !std::isfinite(T)) {
        fail(ErrorKind::InvalidArgument, "T must be positive");
    }
}

}  // namespace

TransitionMatrix transition_matrix(double mu, double T) {
    check_rate_and_step(mu, T);
    double x = mu * T;
    auto p = parity_probs(x);
    TransitionMatrix out;
    out.mu_T = x;
    for (int a = 0; a < 8; a++) {
        for (int b = 0; b < 8; b++) {
            int d = hamming(StateIndex(a), StateIndex(b));
            out.j[a][b] = std::pow(p.odd, d) * std::pow(p.even, 3 - d);
        }
    }
    return out;
}

LogTransitionMatrix log_transition_matrix(double mu, double T) {
    check_rate_and_step(mu, T);
    double x = mu * T;
    double ls = log_sinh(x);
    double lc = log_cosh(x);
    LogTransitionMatrix out;
    out.mu_T = x;
    for (int a = 0; a < 8; a++) {
        for (int b = 0; b < 8; b++) {
            int d = hamming(StateIndex(a), StateIndex(b));
            out.logj[a][b] = d * ls + (3 - d) * lc - 3 * x;
        }
    }
    return out;
}

RateMatrix rate_matrix(double mu) {
    if (!(mu > 0) || !std::isfinite(mu)) {
        fail(ErrorKind::InvalidArgument, "mu must be positive");
    }
    RateMatrix out;
    out.mu = mu;
    for (int a = 0; a < 8; a++) {
        for (int b = 0; b < 8; b++) {
            int d = hamming(StateIndex(a), StateIndex(b));
            out.q[a][b] = d == 1 ? mu : (d == 0 ? -3 * mu : 0.0);
        }
    }
    return out;
}

StateIndex argmax_state(const Vector8 &v) noexcept {
    int best = 0;
    for (int i = 1; i < 8; i++) {
        if (v[i] > v[best]) {
            best = i;
        }
    }
    return StateIndex(best);
}

}  // namespace qecf
