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

#include "qecfilter/rng.hpp"

#include <vector>

namespace qecf {

namespace {

void push_u64(std::vector<uint32_t> &words, uint64_t v) {
    words.push_back(static_cast<uint32_t>(v));
    words.push_back(static_cast<uint32_t>(v >> 32));
}

}  // namespace

Rng::Rng(uint64_t seed) : Rng(seed, StreamTag::Test, {}) {}

Rng::Rng(uint64_t seed, StreamTag tag, std::initializer_list<uint64_t> indices) {
    std::vector<uint32_t> words;
    push_u64(words, seed);
    words.push_back(static_cast<uint32_t>(tag));
    words.push_back(static_cast<uint32_t>(indices.size()));
    for (uint64_t i : indices) {
        push_u64(words, i);
    }
    std::seed_seq seq(words.begin(), words.end());
    engine_.seed(seq);
}

}  // namespace qecf
