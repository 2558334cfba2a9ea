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

#ifndef QECFILTER_CORE_HPP
#define QECFILTER_CORE_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qecf {

/// Failure categories surfaced through the C API as status codes.
enum class ErrorKind {
    InvalidArgument,
    Io,
    Numeric,
    ConfigMismatch,
};

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

   private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string &what);

/// Computational basis state of the three data qubits.
///
/// Bit 2 (most significant) is qubit 1, bit 0 is qubit 3, so 4 is |100> and
/// 1 is |001>.
class StateIndex {
   public:
    constexpr StateIndex() = default;
    explicit StateIndex(int value);

    constexpr int value() const noexcept { return value_; }
    constexpr StateIndex complement() const noexcept { return StateIndex(value_ ^ 7, Unchecked{}); }
    constexpr StateIndex flipped(int mask) const noexcept { return StateIndex((value_ ^ mask) & 7, Unchecked{}); }
    /// Bit value (0 or 1) of qubit 1, 2 or 3.
    constexpr int qubit_bit(int qubit) const noexcept { return (value_ >> (3 - qubit)) & 1; }

    friend constexpr bool operator==(StateIndex, StateIndex) = default;

    static constexpr int count = 8;

   private:
    struct Unchecked {};
    constexpr StateIndex(int value, Unchecked) : value_(value) {}
    int value_ = 0;
};

/// Bit mask of a flip on the given qubit (1, 2 or 3).
constexpr int qubit_mask(int qubit) noexcept { return 1 << (3 - qubit); }

/// Eigenvalues of Z1Z2 and Z2Z3.
struct SyndromePair {
    int s1 = 1;
    int s2 = 1;
    friend constexpr bool operator==(SyndromePair, SyndromePair) = default;
};

SyndromePair syndrome_of(StateIndex state) noexcept;

inline int hamming(StateIndex a, StateIndex b) noexcept { return std::popcount(static_cast<unsigned>(a.value() ^ b.value())); }

/// Product of the two syndrome signs: +1 when both parities agree.
int parity_sign_c(StateIndex state) noexcept;

/// Index 0..3 of the syndrome class; complementary states share a class.
inline int syndrome_class(StateIndex state) noexcept {
    auto s = syndrome_of(state);
    return (s.s1 < 0 ? 2 : 0) | (s.s2 < 0 ? 1 : 0);
}

/// Physical parameters of one run. Times are in microseconds and rates in 1/us.
struct RunConfig {
    double mu = 2.5e-3;
    double T = 0.1;
    double k = 0.5;
    double duration = 100.0;
    uint64_t seed = 1;
    uint32_t trials = 10000;
    int initial_state = 0;

    /// Measurement noise variance per interval, k/T.
    double variance() const noexcept { return k / T; }
    double mu_T() const noexcept { return mu * T; }
    /// duration/T rounded to the nearest integer (at least one step).
    uint64_t steps() const noexcept;
    double effective_duration() const noexcept { return static_cast<double>(steps()) * T; }

    void validate() const;
};

}  // namespace qecf

#endif
