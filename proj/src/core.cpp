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

#include "qecfilter/core.hpp"

#include <cmath>

namespace qecf {

void fail(ErrorKind kind, const std::string &what) { throw Error(kind, what); }

StateIndex::StateIndex(int value) : value_(value) {
    if (value < 0 || value > 7) {
        fail(ErrorKind::InvalidArgument, "state index out of range: " + std::to_string(value));
    }
}

SyndromePair syndrome_of(StateIndex state) noexcept {
    int b1 = state.qubit_bit(1);
    int b2 = state.qubit_bit(2);
    int b3 = state.qubit_bit(3);
    return {b1 == b2 ? 1 : -1, b2 == b3 ? 1 : -1};
}

int parity_sign_c(StateIndex state) noexcept {
    auto s = syndrome_of(state);
    return s.s1 * s.s2;
}

uint64_t RunConfig::steps() const noexcept {
    if (!(T > 0) || !(duration > 0)) {
        return 0;
    }
    double n = std::round(duration / T);
    return n < 1 ? 1 : static_cast<uint64_t>(n);
}

void RunConfig::validate() const {
    if (!(mu > 0) || !std::isfinite(mu)) {
        fail(ErrorKind::InvalidArgument, "mu must be positive");
    }
    if (!(T > 0) || !std::isfinite(T)) {
        fail(ErrorKind::InvalidArgument, "T must be positive");
    }
    if (!(k > 0) || !std::isfinite(k)) {
        fail(ErrorKind::InvalidArgument, "k must be positive");
    }
    if (!(duration > 0) || !std::isfinite(duration)) {
        fail(ErrorKind::InvalidArgument, "duration must be positive");
    }
    if (trials == 0) {
        fail(ErrorKind::InvalidArgument, "trials must be positive");
    }
    if (initial_state < 0 || initial_state > 7) {
        fail(ErrorKind::InvalidArgument, "initial state out of range");
    }
}

}  // namespace qecf
