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

#include "qecfilter/filter_optimal.hpp"

#include <cmath>
#include <numbers>

namespace qecf {

namespace {

// Linear interpolation of exp(-z^2/2) errs by about h^2 |z^2 - 1| / 8 relative;
// at the table edge z = R / sigma, R = 1 + 8 sigma, this sets the spacing.
constexpr double kTableSigmas = 8.0;
constexpr double kRelTol = 1e-6;
constexpr size_t kMaxCells = size_t{1} << 22;

}  // namespace

GaussianTable::GaussianTable(double variance) : variance_(variance) {
    if (!(variance > 0) || !std::isfinite(variance)) {
        fail(ErrorKind::InvalidArgument, "Gaussian table variance must be positive");
    }
    const double sigma = std::sqrt(variance);
    norm_ = 1.0 / std::sqrt(2 * std::numbers::pi * variance);
    range_ = 1 + kTableSigmas * sigma;
    const double zmax2 = (range_ / sigma) * (range_ / sigma);
    h_ = 0.9 * sigma * std::sqrt(8 * kRelTol / (zmax2 - 1));
    auto cells = static_cast<size_t>(std::ceil(2 * range_ / h_));
    if (cells > kMaxCells) {
        // Narrow noise relative to the support: evaluate directly instead.
        last_ = 0;
        return;
    }
    h_ = 2 * range_ / static_cast<double>(cells);
    inv_h_ = 1 / h_;
    last_ = static_cast<double>(cells);
    values_.resize(cells + 1);
    for (size_t i = 0; i <= cells; i++) {
        values_[i] = exact(-range_ + static_cast<double>(i) * h_);
    }
}

double GaussianTable::exact(double d) const noexcept { return norm_ * std::exp(-d * d / (2 * variance_)); }

MeasurementDensityTable::MeasurementDensityTable(const HistogramSet &histograms, double mu, double T, double k,
                                                 int n_max)
    : mu_(mu), T_(T), k_(k), n_max_(n_max), gauss_(k / T) {
    if (!(k > 0)) {
        fail(ErrorKind::InvalidArgument, "k must be positive");
    }
    const StateIndex ref(0);
    for (int mask = 0; mask < 8; mask++) {
        auto h = compose_conditional_density(ref.flipped(mask), ref, mu, T, histograms, n_max);
        h_[mask].assign(h.masses().begin(), h.masses().end());
        for (int i = 0; i < h.nodes(); i++) {
            for (int j = 0; j < h.nodes(); j++) {
                if (h.mass(i, j) != 0) {
                    rows_[mask].push_back(i);
                    break;
                }
            }
        }
        if (mask == 0) {
            nodes_ = h.nodes();
            x_.resize(nodes_);
            for (int i = 0; i < nodes_; i++) {
                x_[i] = h.node(i);
            }
        }
    }
}

double MeasurementDensityTable::density(const MeasurementPair &m, StateIndex next, StateIndex prev) const {
    auto s = syndrome_of(prev);
    const double a = s.s1 * m.m1;
    const double b = s.s2 * m.m2;
    const auto &h = h_[prev.value() ^ next.value()];
    std::vector<double> g2(nodes_);
    for (int j = 0; j < nodes_; j++) {
        g2[j] = gauss_(b - x_[j]);
    }
    double total = 0;
    for (int i = 0; i < nodes_; i++) {
        const double *row = &h[static_cast<size_t>(i) * nodes_];
        double acc = 0;
        for (int j = 0; j < nodes_; j++) {
            acc += row[j] * g2[j];
        }
        total += gauss_(a - x_[i]) * acc;
    }
    return total;
}

void MeasurementDensityTable::densities(const MeasurementPair &m, Matrix8 &out) const {
    const int nn = nodes_;
    constexpr int kMaxNodes = 512;
    if (nn > kMaxNodes) {
        fail(ErrorKind::InvalidArgument, "histogram resolution too large for the filter");
    }
    // The grid is symmetric, so g(-m - x_i) = g(m - x_{last - i}). Direct
    // evaluation here: scattered lookups into the wide table miss cache and
    // measured slower than the exponential.
    double g1[kMaxNodes], g2p[kMaxNodes], g2n[kMaxNodes];
    for (int i = 0; i < nn; i++) {
        g1[i] = gauss_.exact(m.m1 - x_[i]);
        g2p[i] = gauss_.exact(m.m2 - x_[i]);
    }
    for (int i = 0; i < nn; i++) {
        g2n[i] = g2p[nn - 1 - i];
    }
    for (int mask = 0; mask < 8; mask++) {
        const double *h = h_[mask].data();
        // Column sums weighted by the first-axis Gaussians for both signs of m1;
        // written as row updates so the inner loop vectorizes.
        double cp[kMaxNodes] = {};
        double cn[kMaxNodes] = {};
        for (int i : rows_[mask]) {
            const double *row = h + static_cast<size_t>(i) * nn;
            const double gp = g1[i];
            const double gn = g1[nn - 1 - i];
            for (int j = 0; j < nn; j++) {
                cp[j] += gp * row[j];
                cn[j] += gn * row[j];
            }
        }
        // value for start syndromes (+,+), (+,-), (-,+), (-,-).
        double vpp = 0, vpn = 0, vnp = 0, vnn = 0;
        for (int j = 0; j < nn; j++) {
            vpp += cp[j] * g2p[j];
            vpn += cp[j] * g2n[j];
            vnp += cn[j] * g2p[j];
            vnn += cn[j] * g2n[j];
        }
        for (int prev = 0; prev < 8; prev++) {
            auto s = syndrome_of(StateIndex(prev));
            double v = s.s1 > 0 ? (s.s2 > 0 ? vpp : vpn) : (s.s2 > 0 ? vnp : vnn);
            out[prev][prev ^ mask] = v;
        }
    }
}

double measurement_density(const MeasurementPair &m, StateIndex next, StateIndex prev,
                           const MeasurementDensityTable &tables) {
    return tables.density(m, next, prev);
}

OptimalFilter::OptimalFilter(std::shared_ptr<const MeasurementDensityTable> tables, StateIndex initial)
    : tables_(std::move(tables)) {
    if (!tables_) {
        fail(ErrorKind::InvalidArgument, "optimal filter needs built density tables");
    }
    j_ = transition_matrix(tables_->mu(), tables_->T());
    reset(initial);
}

void OptimalFilter::reset(StateIndex initial) {
    p_.fill(0);
    p_[initial.value()] = 1;
}

void OptimalFilter::set_posterior(const Vector8 &p) {
    double total = 0;
    for (double v : p) {
        if (!(v >= 0) || !std::isfinite(v)) {
            fail(ErrorKind::InvalidArgument, "prior entries must be finite and non-negative");
        }
        total += v;
    }
    if (!(total > 0)) {
        fail(ErrorKind::InvalidArgument, "prior must have positive mass");
    }
    for (int a = 0; a < 8; a++) {
        p_[a] = p[a] / total;
    }
}

StateIndex OptimalFilter::update(const MeasurementPair &m) {
    tables_->densities(m, dens_);
    Vector8 next{};
    for (int a = 0; a < 8; a++) {
        if (p_[a] == 0) {
            continue;
        }
        for (int b = 0; b < 8; b++) {
            next[b] += p_[a] * j_.j[a][b] * dens_[a][b];
        }
    }
    double total = 0;
    for (double v : next) {
        total += v;
    }
    if (!(total > 0) || !std::isfinite(total)) {
        fail(ErrorKind::Numeric, "optimal filter posterior underflowed");
    }
    for (int b = 0; b < 8; b++) {
        p_[b] = next[b] / total;
    }
    return predicted();
}

StateIndex OptimalFilter::predicted() const noexcept { return argmax_state(p_); }

std::vector<FilterStep> run_optimal(const TrajectoryRecord &trajectory,
                                    std::shared_ptr<const MeasurementDensityTable> tables) {
    const auto &c = trajectory.config;
    if (!tables || tables->mu() != c.mu || tables->T() != c.T || tables->k() != c.k) {
        fail(ErrorKind::ConfigMismatch, "density tables were built for different run parameters");
    }
    OptimalFilter f(std::move(tables), StateIndex(c.initial_state));
    std::vector<FilterStep> out;
    out.reserve(trajectory.size());
    for (const auto &m : trajectory.measurements) {
        auto s = f.update(m);
        out.push_back({f.posterior(), s});
    }
    return out;
}

}  // namespace qecf
