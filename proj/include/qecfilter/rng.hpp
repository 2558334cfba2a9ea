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

#ifndef QECFILTER_RNG_HPP
#define QECFILTER_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace qecf {

/// Stream tags keep independent uses of one seed from sharing randomness.
enum class StreamTag : uint32_t {
    Trajectory = 1,
    Histogram = 2,
    Diagnostics = 3,
    Test = 99,
};

/// 64-bit Mersenne Twister keyed by (seed, tag, indices).
///
/// Every trajectory, histogram signature and diagnostic run draws from its own
/// stream, so results do not depend on how work is split across threads.
class Rng {
   public:
    explicit Rng(uint64_t seed);
    Rng(uint64_t seed, StreamTag tag, std::initializer_list<uint64_t> indices);

    uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double normal() { return normal_(engine_); }
    double normal(double mean, double sd) { return mean + sd * normal_(engine_); }

    std::mt19937_64 &engine() { return engine_; }

   private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace qecf

#endif
