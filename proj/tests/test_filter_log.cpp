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
#include <numbers>

#include "qecfilter/filter_log.hpp"

using namespace qecf;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

RunConfig fig7() {
    RunConfig c;
    c.mu = 2.5e-3;
    c.T = 0.1;
    c.k = 0.5;
    return c;
}

}  // namespace

TEST(LogDensity, NoErrorAtMean) {
    const double k = 0.5, T = 0.1;
    EXPECT_NEAR(log_measurement_density({1, 1}, StateIndex(0), 0, k, T), -std::log(kTwoPi * k / T), 1e-14);
    // |100> has syndromes (-1, +1).
    EXPECT_NEAR(log_measurement_density({-1, 1}, StateIndex(4), 0, k, T), -std::log(kTwoPi * k / T), 1e-14);
}

TEST(LogDensity, QubitOneBroadFactorCenteredAtZero) {
    const double k = 0.5, T = 0.1, v = k / T;
    double got = log_measurement_density({0, 1}, StateIndex(0), qubit_mask(1), k, T);
    double want = -0.5 * std::log(kTwoPi * (1.0 / 3 + v)) - 0.5 * std::log(kTwoPi * v);
    EXPECT_NEAR(got, want, 1e-14);
}

TEST(LogDensity, QuadraticFormsOfEachCase) {
    // Differences between two readouts cancel the constants, leaving the
    // quadratic forms.
    const double k = 0.3, T = 0.2, v = k / T;
    MeasurementPair a{0.4, -0.7}, b{-1.1, 0.25};
    for (int prev = 0; prev < 8; prev++) {
        auto s = syndrome_of(StateIndex(prev));
        const int c = s.s1 * s.s2;
        auto q_none = [&](MeasurementPair m) {
            return -(T / (2 * k)) * ((m.m1 - s.s1) * (m.m1 - s.s1) + (m.m2 - s.s2) * (m.m2 - s.s2));
        };
        auto q_one = [&](MeasurementPair m) {
            return -3 / (2 * (1 + 3 * v)) * m.m1 * m.m1 - (T / (2 * k)) * (m.m2 - s.s2) * (m.m2 - s.s2);
        };
        auto q_three = [&](MeasurementPair m) {
            return -3 / (2 * (1 + 3 * v)) * m.m2 * m.m2 - (T / (2 * k)) * (m.m1 - s.s1) * (m.m1 - s.s1);
        };
        auto q_two = [&](MeasurementPair m) {
            double d = (m.m1 - c * m.m2) / 2, p = (m.m1 + c * m.m2) / 2;
            return -(T / k) * d * d - 3 / (2 * (1 + 3 * v / 2)) * p * p;
        };
        auto diff = [&](int mask) {
            return log_measurement_density(a, StateIndex(prev), mask, k, T) -
                   log_measurement_density(b, StateIndex(prev), mask, k, T);
        };
        EXPECT_NEAR(diff(0), q_none(a) - q_none(b), 1e-12);
        EXPECT_NEAR(diff(4), q_one(a) - q_one(b), 1e-12);
        EXPECT_NEAR(diff(1), q_three(a) - q_three(b), 1e-12);
        EXPECT_NEAR(diff(2), q_two(a) - q_two(b), 1e-12);
    }
}

TEST(LogDensity, EveryCaseIntegratesToOne) {
    const double k = 0.1, T = 0.1;  // variance 1
    const double h = 0.02, lim = 12;
    for (int prev : {0, 4, 2, 7}) {
        for (int mask = 0; mask < 8; mask++) {
            double total = 0;
            for (double m1 = -lim; m1 <= lim; m1 += h) {
                for (double m2 = -lim; m2 <= lim; m2 += h) {
                    total += std::exp(log_measurement_density({m1, m2}, StateIndex(prev), mask, k, T));
                }
            }
            EXPECT_NEAR(total * h * h, 1.0, 1e-6) << "prev " << prev << " mask " << mask;
        }
    }
}

TEST(LogDensity, RejectsBadArguments) {
    EXPECT_THROW(log_measurement_density({0, 0}, StateIndex(0), 8, 1, 1), Error);
    EXPECT_THROW(log_measurement_density({0, 0}, StateIndex(0), 0, 0, 1), Error);
}

TEST(ExactSingleError, MomentsAndSymmetry) {
    for (double v : {0.25, 1.0, 4.0}) {
        const double T = 0.1, k = v * T;
        const double h = 1e-3, lim = 1 + 12 * std::sqrt(v);
        double m0 = 0, m1 = 0, m2 = 0;
        for (double x = -lim; x <= lim; x += h) {
            double f = exact_single_error_density(x, k, T);
            m0 += f * h;
            m1 += x * f * h;
            m2 += x * x * f * h;
        }
        EXPECT_NEAR(m0, 1.0, 1e-6);
        EXPECT_NEAR(m1, 0.0, 1e-9);
        EXPECT_NEAR(m2, 1.0 / 3 + v, 1e-5);
        EXPECT_DOUBLE_EQ(exact_single_error_density(0.7, k, T), exact_single_error_density(-0.7, k, T));
    }
}

TEST(Softplus, ReferenceValues) {
    Softplus sp;
    EXPECT_NEAR(sp(0), std::log(2.0), 1e-12);
    EXPECT_NEAR(sp(-4), 0.0181, 1e-4);
    EXPECT_EQ(sp(-50), 0.0);
    EXPECT_THROW(sp(0.5), Error);
    Softplus exact(0);
    EXPECT_TRUE(exact.is_exact());
    EXPECT_DOUBLE_EQ(exact(-3), std::log1p(std::exp(-3.0)));
}

TEST(Softplus, TableErrorBelowOneInTenThousand) {
    Softplus sp;
    double worst = 0;
    for (int i = 0; i <= 2000000; i++) {
        double x = -12 + 12.0 * i / 2000000;
        worst = std::max(worst, std::abs(sp(x) - Softplus::exact(x)));
    }
    EXPECT_LT(worst, 1e-4);
}

TEST(Delta, ClosedForm) {
    const double mu = 2.5e-3, T = 0.1, k = 0.5, x = mu * T;
    EXPECT_NEAR(delta_correction(mu, T, k), -(1 + std::log(kTwoPi * k / T) - 3 * std::log(std::cosh(x)) + 3 * x),
                1e-14);
    EXPECT_THROW(delta_correction(mu, 0, k), Error);
}

TEST(InitLogPosterior, PointMassWithFloor) {
    auto p = init_log_posterior(StateIndex(0), -50);
    EXPECT_EQ(p.lp[0], 0.0);
    for (int a = 1; a < 8; a++) {
        EXPECT_EQ(p.lp[a], -50.0);
    }
    EXPECT_EQ(argmax_state(init_log_posterior(StateIndex(6)).lp).value(), 6);
    EXPECT_THROW(init_log_posterior(StateIndex(0), 1.0), Error);
}

TEST(BuildL, UsesTheFlipClassOfEachTransition) {
    auto c = fig7();
    LogFilter f(c);
    LogPosterior prior;
    prior.lp = {0.0, -3.0, -7.5, -1.0, -2.0, -9.0, -4.0, -0.5};
    f.set_state(prior);
    MeasurementPair m{0.3, -0.8};
    auto fast = f.build_L(m);
    auto logj = log_transition_matrix(c.mu, c.T);
    auto ref = build_L(prior, m, logj, c.k, c.T);
    for (int a = 0; a < 8; a++) {
        for (int b = 0; b < 8; b++) {
            EXPECT_NEAR(fast.L[a][b], ref.L[a][b], 1e-10);
            double want = prior.lp[a] + logj.logj[a][b] + log_measurement_density(m, StateIndex(a), a ^ b, c.k, c.T);
            EXPECT_NEAR(ref.L[a][b], want, 1e-12);
        }
    }
}

TEST(LogFilter, OneTermIsALowerBoundOnTwoTerm) {
    auto c = fig7();
    LogFilterConfig one_cfg;
    one_cfg.mode = LogMode::OneTerm;
    LogFilter one(c, one_cfg), two(c);
    Rng rng(3, StreamTag::Test, {1});
    for (int i = 0; i < 100000; i++) {
        LogPosterior prior;
        for (double &v : prior.lp) {
            v = -20 * rng.uniform();
        }
        MeasurementPair m{rng.normal(0, 2.5), rng.normal(0, 2.5)};
        two.set_state(prior);
        auto terms = two.build_L(m);
        auto a = one.advance(prior, terms);
        auto b = two.advance(prior, terms);
        for (int s = 0; s < 8; s++) {
            ASSERT_LE(a.lp[s], b.lp[s]);
        }
    }
}

TEST(LogFilter, TranslationInvariance) {
    auto c = fig7();
    LogFilter f(c);
    Rng rng(9, StreamTag::Test, {2});
    for (int i = 0; i < 10000; i++) {
        LogPosterior prior;
        for (double &v : prior.lp) {
            v = -30 * rng.uniform();
        }
        MeasurementPair m{rng.normal(0, 2.5), rng.normal(0, 2.5)};
        const double shift = 100 * (rng.uniform() - 0.5);
        LogPosterior moved = prior;
        for (double &v : moved.lp) {
            v += shift;
        }
        f.set_state(prior);
        auto a = f.advance(prior, f.build_L(m));
        f.set_state(moved);
        auto b = f.advance(moved, f.build_L(m));
        for (int s = 0; s < 8; s++) {
            ASSERT_NEAR(b.lp[s] - shift, a.lp[s], 1e-12 * (1 + std::abs(shift) + std::abs(a.lp[s])));
        }
        ASSERT_EQ(argmax_state(a.lp), argmax_state(b.lp));
    }
}

TEST(LogFilter, DeltaCorrectionOnlyShifts) {
    RunConfig c = fig7();
    c.mu = 0.02;
    LogFilterConfig raw_cfg;
    raw_cfg.apply_delta_correction = false;
    LogFilter raw(c, raw_cfg), cor(c);
    auto rec = simulate_trajectory(c, uint64_t{4});
    for (size_t i = 0; i < rec.size(); i++) {
        auto a = raw.step(rec.measurements[i]);
        auto b = cor.step(rec.measurements[i]);
        ASSERT_EQ(a, b) << "step " << i;
        const double shift = raw.state().lp[0] - cor.state().lp[0];
        EXPECT_NEAR(shift, cor.delta() * static_cast<double>(i + 1), 1e-9 * (i + 1));
    }
}

TEST(LogFilter, UncorrectedMaximumDriftsByDelta) {
    RunConfig c = fig7();
    LogFilterConfig cfg;
    cfg.apply_delta_correction = false;
    const int trials = 200;
    const uint64_t steps = c.steps();
    std::vector<double> mean(steps, 0);
    for (int t = 0; t < trials; t++) {
        LogFilter f(c, cfg);
        auto rec = simulate_trajectory(c, static_cast<uint64_t>(t));
        for (uint64_t i = 0; i < steps; i++) {
            f.step(rec.measurements[i]);
            mean[i] += *std::max_element(f.state().lp.begin(), f.state().lp.end()) / trials;
        }
    }
    // Least squares slope over the second half of the run.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const uint64_t lo = steps / 2;
    const double n = static_cast<double>(steps - lo);
    for (uint64_t i = lo; i < steps; i++) {
        double x = static_cast<double>(i);
        sx += x;
        sy += mean[i];
        sxx += x * x;
        sxy += x * mean[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    LogFilter ref(c);
    EXPECT_NEAR(slope / ref.delta(), 1.0, 0.05);
}

TEST(LogFilter, EntriesStayFiniteAndClamped) {
    RunConfig c = fig7();
    c.duration = 2000;
    LogFilterConfig cfg;
    cfg.apply_delta_correction = false;
    cfg.clamp_floor = -200;
    LogFilter f(c, cfg);
    auto rec = simulate_trajectory(c, uint64_t{1});
    for (const auto &m : rec.measurements) {
        f.step(m);
        double mx = *std::max_element(f.state().lp.begin(), f.state().lp.end());
        for (double v : f.state().lp) {
            ASSERT_TRUE(std::isfinite(v));
            ASSERT_GE(v, mx - 200);
        }
    }
    EXPECT_EQ(f.state().steps_elapsed, c.steps());
}

TEST(LogFilter, ConfigValidation) {
    LogFilterConfig cfg;
    cfg.clamp_floor = 1;
    EXPECT_THROW(LogFilter(fig7(), cfg), Error);
    cfg = {};
    cfg.softplus_table_resolution = 1;
    EXPECT_THROW(LogFilter(fig7(), cfg), Error);
}

TEST(LogFilter, ExactSoftplusMatchesTable) {
    RunConfig c = fig7();
    c.mu = 0.02;
    LogFilterConfig exact;
    exact.softplus_table_resolution = 0;
    LogFilter a(c), b(c, exact);
    auto rec = simulate_trajectory(c, uint64_t{8});
    int same = 0;
    for (const auto &m : rec.measurements) {
        same += a.step(m) == b.step(m);
    }
    EXPECT_GE(same, static_cast<int>(rec.size()) - 2);
}

TEST(DiagnosticsG, TrueStateDominatesAtModerateNoise) {
    Rng rng(2);
    const double k = 0.4, T = 0.1;  // k/T = 4
    auto g = diagnostics_G(StateIndex(0), k, T, 20000, rng);
    double best = -INFINITY;
    for (int a = 0; a < 8; a++) {
        for (int b = 0; b < 8; b++) {
            best = std::max(best, g[a][b]);
        }
    }
    EXPECT_EQ(g[0][0], best);
    EXPECT_THROW(diagnostics_G(StateIndex(0), k, T, 10, rng), Error);
}

TEST(DiagnosticsG, SimilarScaleUnderHeavyNoise) {
    Rng rng(3);
    auto g = diagnostics_G(StateIndex(0), 10.0, 0.1, 20000, rng);  // T/k = 0.01
    double lo = INFINITY, hi = -INFINITY;
    for (auto &row : g) {
        for (double v : row) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    EXPECT_LT(hi - lo, 1.0);
}

TEST(DiagnosticsG, WrongSyndromeScalesWithPrecision) {
    // For an unflipped transition out of a state whose syndromes disagree with
    // the truth in d places, E log P = -2 d T/k - log(2 pi k/T) - 1.
    for (double ratio : {10.0, 40.0}) {
        Rng rng(4);
        const double T = 0.1, k = T / ratio, v = k / T;
        auto g = diagnostics_G(StateIndex(0), k, T, 50000, rng);
        for (int a = 0; a < 8; a++) {
            auto s = syndrome_of(StateIndex(a));
            int d = (s.s1 < 0) + (s.s2 < 0);
            double want = -2.0 * d / v - std::log(kTwoPi * v) - 1;
            EXPECT_NEAR(g[a][a], want, 0.02 * (1 + std::abs(want))) << "ratio " << ratio << " state " << a;
        }
    }
}
