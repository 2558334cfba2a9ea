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

#include "qecfilter/filter_log.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qecf {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

// Whether syndrome 1 (qubits 1, 2) or syndrome 2 (qubits 2, 3) changes parity.
bool flips_s1(int mask) { return (((mask >> 2) ^ (mask >> 1)) & 1) != 0; }
bool flips_s2(int mask) { return (((mask >> 1) ^ mask) & 1) != 0; }

double log_normal(double x, double mean, double var) {
    double d = x - mean;
    return -d * d / (2 * var) - 0.5 * std::log(kTwoPi * var);
}

}  // namespace

void LogFilterConfig::validate() const {
    if (!(clamp_floor < 0)) {
        fail(ErrorKind::InvalidArgument, "clamp_floor must be negative");
    }
    if (softplus_table_resolution < 0 || softplus_table_resolution == 1) {
        fail(ErrorKind::InvalidArgument, "softplus table needs at least 2 knots (or 0 for exact)");
    }
}

double log_measurement_density(const MeasurementPair &m, StateIndex prev, int flip_mask, double k, double T) {
    if (!(k > 0) || !(T > 0)) {
        fail(ErrorKind::InvalidArgument, "k and T must be positive");
    }
    if (flip_mask < 0 || flip_mask > 7) {
        fail(ErrorKind::InvalidArgument, "flip mask must be in [0, 7]");
    }
    const double v = k / T;
    const double broad = 1.0 / 3.0 + v;
    auto s = syndrome_of(prev);
    if (flip_mask == qubit_mask(2)) {
        const int c = s.s1 * s.s2;
        const double a = (m.m1 - c * m.m2) / 2;
        const double b = (m.m1 + c * m.m2) / 2;
        return -std::log(2.0) + log_normal(a, 0, v / 2) + log_normal(b, 0, 1.0 / 3.0 + v / 2);
    }
    double out = 0;
    out += flips_s1(flip_mask) ? log_normal(m.m1, 0, broad) : log_normal(m.m1, s.s1, v);
    out += flips_s2(flip_mask) ? log_normal(m.m2, 0, broad) : log_normal(m.m2, s.s2, v);
    return out;
}

double exact_single_error_density(double m1, double k, double T) {
    if (!(k > 0) || !(T > 0)) {
        fail(ErrorKind::InvalidArgument, "k and T must be positive");
    }
    const double scale = std::sqrt(2 * k / T);
    return 0.25 * (std::erf((m1 + 1) / scale) - std::erf((m1 - 1) / scale));
}

Softplus::Softplus(int knots) {
    if (knots == 0) {
        exact_ = true;
        return;
    }
    if (knots < 2) {
        fail(ErrorKind::InvalidArgument, "softplus table needs at least 2 knots");
    }
    values_.resize(knots);
    const double h = -kLow / (knots - 1);
    inv_h_ = 1 / h;
    for (int i = 0; i < knots; i++) {
        values_[i] = exact(kLow + i * h);
    }
}

double Softplus::exact(double x) {
    if (x > 0) {
        bad_input(x);
    }
    return std::log1p(std::exp(x));
}

void Softplus::bad_input(double x) {
    fail(ErrorKind::InvalidArgument, "softplus argument must be <= 0, got " + std::to_string(x));
}

double delta_correction(double mu, double T, double k) {
    if (!(T > 0) || !(k > 0) || !(mu >= 0)) {
        fail(ErrorKind::InvalidArgument, "delta correction needs mu >= 0 and positive T, k");
    }
    const double x = mu * T;
    return -(1 + std::log(kTwoPi * k / T) - 3 * log_cosh(x) + 3 * x);
}

LogPosterior init_log_posterior(StateIndex initial, double floor) {
    if (!(floor < 0)) {
        fail(ErrorKind::InvalidArgument, "initial floor must be negative");
    }
    LogPosterior p;
    p.lp.fill(floor);
    p.lp[initial.value()] = 0;
    return p;
}

LogFilter::LogFilter(const RunConfig &run, LogFilterConfig config)
    : run_(run), config_(config), softplus_(config.softplus_table_resolution) {
    run_.validate();
    config_.validate();
    logj_ = log_transition_matrix(run_.mu, run_.T);
    delta_ = delta_correction(run_.mu, run_.T, run_.k);
    const double v = run_.variance();
    inv_v_ = 1 / v;
    inv_broad_ = 1 / (1.0 / 3.0 + v);
    inv_broad2_ = 1 / (1.0 / 3.0 + v / 2);
    c_point_ = -0.5 * std::log(kTwoPi * v);
    c_broad_ = -0.5 * std::log(kTwoPi * (1.0 / 3.0 + v));
    c_q2_ = -std::log(2.0) - 0.5 * std::log(kTwoPi * v / 2) - 0.5 * std::log(kTwoPi * (1.0 / 3.0 + v / 2));
    reset(StateIndex(run_.initial_state));
}

void LogFilter::reset(StateIndex initial, double floor) { state_ = init_log_posterior(initial, floor); }

// out[syndrome class][flip mask], the class encoded as in syndrome_class().
void LogFilter::log_densities(const MeasurementPair &m, double out[4][8]) const {
    const double m1 = m.m1;
    const double m2 = m.m2;
    const double b1 = c_broad_ - 0.5 * m1 * m1 * inv_broad_;
    const double b2 = c_broad_ - 0.5 * m2 * m2 * inv_broad_;
    const double p1[2] = {c_point_ - 0.5 * (m1 - 1) * (m1 - 1) * inv_v_, c_point_ - 0.5 * (m1 + 1) * (m1 + 1) * inv_v_};
    const double p2[2] = {c_point_ - 0.5 * (m2 - 1) * (m2 - 1) * inv_v_, c_point_ - 0.5 * (m2 + 1) * (m2 + 1) * inv_v_};
    const double dm = (m1 - m2) / 2;
    const double sm = (m1 + m2) / 2;
    // c = +1: a = dm, b = sm; c = -1: a = sm, b = dm.
    const double q2[2] = {c_q2_ - dm * dm * inv_v_ - 0.5 * sm * sm * inv_broad2_,
                          c_q2_ - sm * sm * inv_v_ - 0.5 * dm * dm * inv_broad2_};
    for (int cls = 0; cls < 4; cls++) {
        const int n1 = (cls >> 1) & 1;  // 1 when s1 = -1
        const int n2 = cls & 1;
        for (int mask = 0; mask < 8; mask++) {
            if (mask == qubit_mask(2)) {
                out[cls][mask] = q2[n1 ^ n2];
            } else {
                out[cls][mask] = (flips_s1(mask) ? b1 : p1[n1]) + (flips_s2(mask) ? b2 : p2[n2]);
            }
        }
    }
}

LTerms LogFilter::build_L(const MeasurementPair &m) const {
    double dens[4][8];
    log_densities(m, dens);
    LTerms t;
    for (int a = 0; a < 8; a++) {
        const int cls = syndrome_class(StateIndex(a));
        for (int b = 0; b < 8; b++) {
            t.L[a][b] = state_.lp[a] + logj_.logj[a][b] + dens[cls][a ^ b];
        }
    }
    return t;
}

LogPosterior LogFilter::advance(const LogPosterior &prior, const LTerms &terms) const {
    LogPosterior out;
    out.steps_elapsed = prior.steps_elapsed + 1;
    const bool two = config_.mode == LogMode::TwoTerm;
    for (int b = 0; b < 8; b++) {
        double top = -INFINITY;
        double second = -INFINITY;
        for (int a = 0; a < 8; a++) {
            double v = terms.L[a][b];
            if (v > top) {
                second = top;
                top = v;
            } else if (v > second) {
                second = v;
            }
        }
        double r = top;
        if (two) {
            r += softplus_(second - top);
        }
        if (config_.apply_delta_correction) {
            r -= delta_;
        }
        out.lp[b] = r;
    }
    double mx = *std::max_element(out.lp.begin(), out.lp.end());
    double bound = mx + config_.clamp_floor;
    for (double &v : out.lp) {
        v = std::max(v, bound);
    }
    return out;
}

StateIndex LogFilter::step(const MeasurementPair &m) {
    state_ = advance(state_, build_L(m));
    return predicted();
}

StateIndex LogFilter::predicted() const noexcept { return argmax_state(state_.lp); }

LTerms build_L(const LogPosterior &prior, const MeasurementPair &m, const LogTransitionMatrix &logj, double k,
               double T) {
    LTerms t;
    for (int a = 0; a < 8; a++) {
        for (int b = 0; b < 8; b++) {
            t.L[a][b] = prior.lp[a] + logj.logj[a][b] + log_measurement_density(m, StateIndex(a), a ^ b, k, T);
        }
    }
    return t;
}

Matrix8 diagnostics_G(StateIndex truth, double k, double T, uint64_t samples, Rng &rng) {
    if (samples < 10000) {
        fail(ErrorKind::InvalidArgument, "diagnostics_G needs at least 1e4 samples");
    }
    auto s = syndrome_of(truth);
    const double sd = std::sqrt(k / T);
    Matrix8 g{};
    for (uint64_t n = 0; n < samples; n++) {
        MeasurementPair m{rng.normal(s.s1, sd), rng.normal(s.s2, sd)};
        for (int a = 0; a < 8; a++) {
            for (int b = 0; b < 8; b++) {
                g[a][b] += log_measurement_density(m, StateIndex(a), a ^ b, k, T);
            }
        }
    }
    for (auto &row : g) {
        for (double &v : row) {
            v /= static_cast<double>(samples);
        }
    }
    return g;
}

}  // namespace qecf
