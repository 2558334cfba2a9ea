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

#ifndef QECFILTER_FILTER_LOG_HPP
#define QECFILTER_FILTER_LOG_HPP

#include <array>
#include <vector>

#include "qecfilter/core.hpp"
#include "qecfilter/markov.hpp"
#include "qecfilter/rng.hpp"
#include "qecfilter/simulator.hpp"

namespace qecf {

/// Unnormalized log-probabilities of the eight states.
struct LogPosterior {
    Vector8 lp{};
    uint64_t steps_elapsed = 0;
};

/// L[prev][next]: log prior + log transition + log measurement density.
struct LTerms {
    Matrix8 L{};
};

enum class LogMode {
    OneTerm,
    TwoTerm,
};

struct LogFilterConfig {
    LogMode mode = LogMode::TwoTerm;
    bool apply_delta_correction = true;
    /// Knots of the softplus table over [-10, 0]; 0 selects exact evaluation.
    int softplus_table_resolution = 1024;
    /// Entries more than this far below the maximum are clamped.
    double clamp_floor = -1e6;

    void validate() const;
};

/// Log of the approximate measurement density for a transition that flips
/// `flip_mask` starting from `prev`.
///
/// Single flips use the Gaussian fits (variance 1/3 + k/T for a flipped
/// syndrome). Multi-qubit flips assign each syndrome its own factor: broad and
/// zero-mean if its parity flips, centered on the start sign otherwise.
double log_measurement_density(const MeasurementPair &m, StateIndex prev, int flip_mask, double k, double T);

/// Exact density of one integrated readout whose syndrome mean is uniform on
/// [-1, 1]: (erf((m + 1)/sqrt(2k/T)) - erf((m - 1)/sqrt(2k/T))) / 4.
double exact_single_error_density(double m1, double k, double T);

/// Table of log(1 + e^x) on [-10, 0] with linear interpolation; zero below,
/// where the true value is under 4.6e-5.
class Softplus {
   public:
    static constexpr double kLow = -10.0;

    /// `knots` == 0 selects exact evaluation.
    explicit Softplus(int knots = 1024);

    double operator()(double x) const {
        if (exact_) {
            return exact(x);
        }
        if (x <= kLow) {
            return 0;
        }
        if (x > 0) {
            bad_input(x);
        }
        double u = (x - kLow) * inv_h_;
        auto i = static_cast<size_t>(u);
        if (i >= values_.size() - 1) {
            return values_.back();
        }
        double f = u - static_cast<double>(i);
        return values_[i] + f * (values_[i + 1] - values_[i]);
    }
    static double exact(double x);
    bool is_exact() const noexcept { return exact_; }

   private:
    [[noreturn]] static void bad_input(double x);
    bool exact_ = false;
    double inv_h_ = 0;
    std::vector<double> values_;
};

/// Per-step constant drift of the log-posterior maximum:
/// -[1 + log(2 pi k/T) - 3 log cosh(mu T) + 3 mu T].
double delta_correction(double mu, double T, double k);

LogPosterior init_log_posterior(StateIndex initial, double floor = -50.0);

/// Log-domain filter keeping the top one or two predecessor terms per state.
class LogFilter {
   public:
    LogFilter(const RunConfig &run, LogFilterConfig config = {});

    void reset(StateIndex initial, double floor = -50.0);
    StateIndex step(const MeasurementPair &m);

    /// L-terms for the current prior and a measurement, without advancing.
    LTerms build_L(const MeasurementPair &m) const;
    /// Pure update used by step(): new log posterior from a prior and L-terms.
    LogPosterior advance(const LogPosterior &prior, const LTerms &terms) const;

    const LogPosterior &state() const noexcept { return state_; }
    void set_state(const LogPosterior &s) noexcept { state_ = s; }
    StateIndex predicted() const noexcept;
    const LogFilterConfig &config() const noexcept { return config_; }
    double delta() const noexcept { return delta_; }
    const LogTransitionMatrix &log_j() const noexcept { return logj_; }

   private:
    void log_densities(const MeasurementPair &m, double out[4][8]) const;

    RunConfig run_;
    LogFilterConfig config_;
    LogTransitionMatrix logj_;
    Softplus softplus_;
    double delta_ = 0;
    double inv_v_ = 0;
    double inv_broad_ = 0;
    double inv_broad2_ = 0;
    double c_point_ = 0;
    double c_broad_ = 0;
    double c_q2_ = 0;
    LogPosterior state_;
};

/// Free-function form of build_L for an explicit prior.
LTerms build_L(const LogPosterior &prior, const MeasurementPair &m, const LogTransitionMatrix &logj, double k,
               double T);

/// Monte Carlo mean of log P(m | next, prev) with measurements drawn for
/// error-free intervals in `truth`; result[prev][next].
Matrix8 diagnostics_G(StateIndex truth, double k, double T, uint64_t samples, Rng &rng);

}  // namespace qecf

#endif
