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

#include <cmath>

#include "qecfilter/baselines.hpp"
#include "qecfilter/filter_log.hpp"

using namespace qecf;

TEST(Wonham, ZeroReadoutZeroRateLeavesStateUnchanged) {
    WonhamState s;
    s.p = {0.1, 0.2, 0.05, 0.15, 0.1, 0.1, 0.2, 0.1};
    auto before = s.p;
    auto q = rate_matrix(1e-300);
    wonham_step(s, {0, 0}, q, 0.5, 0.1);
    for (int a = 0; a < 8; a++) {
        EXPECT_NEAR(s.p[a], before[a], 1e-15);
    }
}

TEST(Wonham, FirstOrderUpdate) {
    WonhamState s;
    s.p = {0.5, 0, 0, 0, 0.5, 0, 0, 0};
    const double mu = 0.1, k = 0.5, T = 0.01;
    auto q = rate_matrix(mu);
    MeasurementPair m{0.8, 1.1};
    Vector8 want{};
    double total = 0;
    for (int b = 0; b < 8; b++) {
        double drift = 0;
        for (int a = 0; a < 8; a++) {
            drift += s.p[a] * q.q[a][b];
        }
        auto syn = syndrome_of(StateIndex(b));
        want[b] = s.p[b] + T * (drift + (m.m1 * syn.s1 + m.m2 * syn.s2) / k * s.p[b]);
        total += want[b];
    }
    wonham_step(s, m, q, k, T);
    for (int b = 0; b < 8; b++) {
        EXPECT_NEAR(s.p[b], want[b] / total, 1e-15);
    }
}

TEST(Wonham, StaysAProbabilityVector) {
    RunConfig c;
    c.mu = 0.05;
    c.duration = 200;
    for (auto mode : {WonhamNegative::Reflect, WonhamNegative::Clamp}) {
        WonhamFilter f(c, true, mode);
        auto rec = simulate_trajectory(c, uint64_t{3});
        for (const auto &m : rec.measurements) {
            f.step(m);
            double sum = 0;
            for (double p : f.posterior()) {
                ASSERT_GE(p, 0.0);
                sum += p;
            }
            ASSERT_NEAR(sum, 1.0, 1e-12);
        }
    }
}

TEST(Wonham, NegativeEntryHandling) {
    // A large readout against the (+,+) class pushes it below zero in one step.
    auto q = rate_matrix(0.01);
    WonhamState clamp, reflect;
    clamp.p = {0.5, 0, 0, 0, 0.5, 0, 0, 0};
    reflect.p = clamp.p;
    MeasurementPair m{-30, -30};
    wonham_step(clamp, m, q, 0.5, 0.1, true, WonhamNegative::Clamp);
    wonham_step(reflect, m, q, 0.5, 0.1, true, WonhamNegative::Reflect);
    EXPECT_EQ(clamp.p[0], 0.0);
    EXPECT_GT(reflect.p[0], 0.0);
    // With no leakage the only supported entry is clamped away: divergence.
    const RateMatrix still{};
    WonhamState dead;
    dead.p[0] = 1;
    EXPECT_THROW(wonham_step(dead, m, still, 0.5, 0.1, true, WonhamNegative::Clamp), Error);
    dead.p = {};
    dead.p[0] = 1;
    EXPECT_NO_THROW(wonham_step(dead, m, still, 0.5, 0.1, true, WonhamNegative::Reflect));
    EXPECT_EQ(dead.p[0], 1.0);
}

TEST(Wonham, UnnormalizedKeepsScale) {
    WonhamState s;
    s.p[0] = 1;
    wonham_step(s, {1, 1}, rate_matrix(0.01), 0.5, 0.1, false);
    double sum = 0;
    for (double v : s.p) {
        sum += v;
    }
    EXPECT_NEAR(sum, 1 + 0.1 * 2 / 0.5, 1e-12);
}

TEST(Wonham, WorseThanTwoTermAtCoarseStep) {
    RunConfig c;
    c.mu = 2.5e-3;
    c.T = 0.1;
    c.k = 0.1;
    int wonham_bad = 0, two_bad = 0;
    for (uint64_t t = 0; t < 3000; t++) {
        auto rec = simulate_trajectory(c, t);
        WonhamFilter w(c);
        LogFilter l(c);
        StateIndex pw, pl;
        for (const auto &m : rec.measurements) {
            pw = w.step(m);
            pl = l.step(m);
        }
        wonham_bad += hamming(pw, rec.states.back()) > 1;
        two_bad += hamming(pl, rec.states.back()) > 1;
    }
    EXPECT_GT(wonham_bad, two_bad);
}

TEST(Threshold, ParamsValidation) {
    ThresholdParams p;
    EXPECT_NO_THROW(p.validate());
    p.eta_low = 0.6;
    EXPECT_THROW(p.validate(), Error);
    p = {};
    p.ema_time_constant = 0;
    EXPECT_THROW(p.validate(), Error);
}

TEST(Threshold, LambdaFromTimeConstant) {
    RunConfig c;
    c.T = 0.1;
    ThresholdFilter f(c, {2.0, 0.0, 0.5});
    EXPECT_NEAR(f.lambda(), 1 - std::exp(-0.05), 1e-15);
}

TEST(Threshold, ConstantCodeReadoutNeverFlips) {
    RunConfig c;
    ThresholdFilter f(c);
    for (int i = 0; i < 10000; i++) {
        EXPECT_EQ(f.step({1, 1}).value(), 0);
    }
}

TEST(Threshold, SustainedStepDetectsQubitOneAfterCrossing) {
    RunConfig c;
    c.T = 0.1;
    ThresholdParams p{1.0, 0.0, 0.5};
    ThresholdFilter f(c, p);
    const double lambda = f.lambda();
    // The first average decays as 1 - 2 (1 - (1 - lambda)^n) and crosses
    // eta_low once (1 - lambda)^n < (1 + eta_low) / 2.
    const int expect = static_cast<int>(std::ceil(std::log((1 + p.eta_low) / 2) / std::log(1 - lambda)));
    int detected = -1;
    for (int i = 1; i <= 200 && detected < 0; i++) {
        if (f.step({-1, 1}).value() == 4) {
            detected = i;
        }
    }
    EXPECT_EQ(detected, expect);
    // The belief then holds.
    for (int i = 0; i < 100; i++) {
        EXPECT_EQ(f.step({-1, 1}).value(), 4);
    }
}

TEST(Threshold, BothSyndromesLowMeansQubitTwo) {
    RunConfig c;
    ThresholdFilter f(c);
    StateIndex s;
    for (int i = 0; i < 100; i++) {
        s = f.step({-1, -1});
    }
    EXPECT_EQ(s.value(), 2);
    ThresholdFilter g(c);
    for (int i = 0; i < 100; i++) {
        s = g.step({1, -1});
    }
    EXPECT_EQ(s.value(), 1);
}

TEST(Threshold, InvariantUnderStepRefinementAtFixedTau) {
    // Same readout history at two step sizes: detection time agrees within a
    // coarse step.
    auto detect_time = [](double T) {
        RunConfig c;
        c.T = T;
        ThresholdFilter f(c, {1.0, 0.0, 0.5});
        for (int i = 1; i < 100000; i++) {
            if (f.step({-1, 1}).value() == 4) {
                return i * T;
            }
        }
        return -1.0;
    };
    double coarse = detect_time(0.1);
    double fine = detect_time(0.001);
    EXPECT_NEAR(coarse, fine, 0.1 + 1e-9);
    EXPECT_NEAR(fine, std::log(2.0), 0.002);
}

TEST(Baselines, DeterministicGivenStream) {
    RunConfig c;
    c.mu = 0.03;
    auto rec = simulate_trajectory(c, uint64_t{6});
    WonhamFilter w1(c), w2(c);
    ThresholdFilter t1(c), t2(c);
    for (const auto &m : rec.measurements) {
        EXPECT_EQ(w1.step(m), w2.step(m));
        EXPECT_EQ(t1.step(m), t2.step(m));
    }
    EXPECT_EQ(w1.posterior(), w2.posterior());
}
