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

#include <gtest/gtest.h>

#include <set>

#include "qecfilter/core.hpp"

using namespace qecf;

TEST(StateIndex, RejectsOutOfRange) {
    EXPECT_THROW(StateIndex(-1), Error);
    EXPECT_THROW(StateIndex(8), Error);
    EXPECT_NO_THROW(StateIndex(7));
}

TEST(StateIndex, BitConvention) {
    // 4 is |100>: qubit 1 is the most significant bit.
    StateIndex s(4);
    EXPECT_EQ(s.qubit_bit(1), 1);
    EXPECT_EQ(s.qubit_bit(2), 0);
    EXPECT_EQ(s.qubit_bit(3), 0);
    EXPECT_EQ(StateIndex(1).qubit_bit(3), 1);
    EXPECT_EQ(qubit_mask(1), 4);
    EXPECT_EQ(qubit_mask(2), 2);
    EXPECT_EQ(qubit_mask(3), 1);
}

TEST(StateIndex, ComplementSharesParitySubspace) {
    for (int v = 0; v < 8; v++) {
        StateIndex s(v);
        EXPECT_EQ(s.complement().value(), v ^ 7);
        EXPECT_EQ(syndrome_of(s), syndrome_of(s.complement()));
    }
}

TEST(Syndrome, CodeSpaceAndErrorSpaces) {
    EXPECT_EQ(syndrome_of(StateIndex(0)), (SyndromePair{1, 1}));
    EXPECT_EQ(syndrome_of(StateIndex(4)), (SyndromePair{-1, 1}));
    EXPECT_EQ(syndrome_of(StateIndex(2)), (SyndromePair{-1, -1}));
    EXPECT_EQ(syndrome_of(StateIndex(1)), (SyndromePair{1, -1}));
}

TEST(Syndrome, MatchesBitEqualities) {
    for (int v = 0; v < 8; v++) {
        StateIndex s(v);
        auto p = syndrome_of(s);
        EXPECT_EQ(p.s1 == 1, s.qubit_bit(1) == s.qubit_bit(2));
        EXPECT_EQ(p.s2 == 1, s.qubit_bit(2) == s.qubit_bit(3));
    }
}

TEST(Syndrome, FourClassesOfTwo) {
    std::multiset<int> classes;
    for (int v = 0; v < 8; v++) {
        classes.insert(syndrome_class(StateIndex(v)));
    }
    for (int c = 0; c < 4; c++) {
        EXPECT_EQ(classes.count(c), 2u);
    }
}

TEST(Syndrome, ParitySignC) {
    EXPECT_EQ(parity_sign_c(StateIndex(0)), 1);
    EXPECT_EQ(parity_sign_c(StateIndex(4)), -1);
    EXPECT_EQ(parity_sign_c(StateIndex(2)), 1);
    for (int v = 0; v < 8; v++) {
        auto p = syndrome_of(StateIndex(v));
        EXPECT_EQ(parity_sign_c(StateIndex(v)), p.s1 * p.s2);
    }
}

TEST(Hamming, Examples) {
    EXPECT_EQ(hamming(StateIndex(0), StateIndex(7)), 3);
    EXPECT_EQ(hamming(StateIndex(0), StateIndex(4)), 1);
    EXPECT_EQ(hamming(StateIndex(5), StateIndex(5)), 0);
}

TEST(Hamming, IsAMetric) {
    for (int a = 0; a < 8; a++) {
        for (int b = 0; b < 8; b++) {
            StateIndex sa(a), sb(b);
            EXPECT_EQ(hamming(sa, sb), hamming(sb, sa));
            EXPECT_EQ(hamming(sa, sb) == 0, a == b);
            for (int c = 0; c < 8; c++) {
                EXPECT_LE(hamming(sa, StateIndex(c)), hamming(sa, sb) + hamming(sb, StateIndex(c)));
            }
        }
    }
}

TEST(RunConfig, StepsRoundToNearest) {
    RunConfig c;
    c.duration = 100;
    c.T = 0.1;
    EXPECT_EQ(c.steps(), 1000u);
    c.T = 0.3;
    EXPECT_EQ(c.steps(), 333u);
    EXPECT_NEAR(c.effective_duration(), 99.9, 1e-9);
    c.T = 1000;
    EXPECT_EQ(c.steps(), 1u);
}

TEST(RunConfig, VarianceAndValidation) {
    RunConfig c;
    c.k = 0.5;
    c.T = 0.1;
    EXPECT_DOUBLE_EQ(c.variance(), 5.0);
    EXPECT_NO_THROW(c.validate());
    c.k = 0;
    EXPECT_THROW(c.validate(), Error);
    c = RunConfig{};
    c.trials = 0;
    EXPECT_THROW(c.validate(), Error);
    c = RunConfig{};
    c.initial_state = 9;
    EXPECT_THROW(c.validate(), Error);
}
