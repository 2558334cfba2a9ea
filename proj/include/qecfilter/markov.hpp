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

#ifndef QECFILTER_MARKOV_HPP
#define QECFILTER_MARKOV_HPP

#include <array>

#include "qecfilter/core.hpp"

namespace qecf {

using Matrix8 = std::array<std::array<double, 8>, 8>;
using Vector8 = std::array<double, 8>;

struct ParityProbs {
    double even = 1;
    double odd = 0;
};

/// Probability that a Poisson(mu_T) count is even / odd.
ParityProbs parity_probs(double mu_T);

/// log(sinh(x)) for x > 0, accurate down to x ~ 1e-300.
double log_sinh(double x);
/// log(cosh(x)) for x >= 0.
double log_cosh(double x);

/// Interval-to-interval state transition probabilities, j[from][to].
struct TransitionMatrix {
    Matrix8 j{};
    double mu_T = 0;
};

struct LogTransitionMatrix {
    Matrix8 logj{};
    double mu_T = 0;
};

/// Generator of three independent bit-flip processes, q[from][to].
struct RateMatrix {
    Matrix8 q{};
    double mu = 0;
};

TransitionMatrix transition_matrix(double mu, double T);
/// Built directly in log space; exp of each entry reproduces transition_matrix.
LogTransitionMatrix log_transition_matrix(double mu, double T);
RateMatrix rate_matrix(double mu);

/// Index of the largest entry; the lowest index wins ties.
StateIndex argmax_state(const Vector8 &v) noexcept;

}  // namespace qecf

#endif
