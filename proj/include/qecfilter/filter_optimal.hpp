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

#ifndef QECFILTER_FILTER_OPTIMAL_HPP
#define QECFILTER_FILTER_OPTIMAL_HPP

#include <array>
#include <memory>
#include <vector>

#include "qecfilter/core.hpp"
#include "qecfilter/markov.hpp"
#include "qecfilter/simulator.hpp"
#include "qecfilter/synd_density.hpp"

namespace qecf {

/// Normal density with a fixed variance, tabulated for linear interpolation.
///
/// The table covers |d| <= 1 + 8 sigma with a spacing small enough that the
/// interpolated value is within 1e-6 relative of the exact one. Arguments
/// outside the table are evaluated directly.
class GaussianTable {
   public:
    GaussianTable() = default;
    explicit GaussianTable(double variance);

    double operator()(double d) const noexcept {
        double u = (d + range_) * inv_h_;
        if (u >= 0 && u < last_) {
            auto i = static_cast<size_t>(u);
            double f = u - static_cast<double>(i);
            return values_[i] + f * (values_[i + 1] - values_[i]);
        }
        return exact(d);
    }
    double exact(double d) const noexcept;

    double variance() const noexcept { return variance_; }
    double spacing() const noexcept { return h_; }
    double range() const noexcept { return range_; }
    size_t size() const noexcept { return values_.size(); }

   private:
    double variance_ = 1;
    double norm_ = 0;
    double range_ = 0;
    double h_ = 1;
    double inv_h_ = 1;
    double last_ = 0;
    std::vector<double> values_;
};

/// Composed syndrome-mean distributions for every flip mask, built for the
/// (+,+) start parity, together with the measurement noise table.
///
/// The density for any other start state follows by reflecting the measurement
/// through that state's syndrome signs.
class MeasurementDensityTable {
   public:
    MeasurementDensityTable(const HistogramSet &histograms, double mu, double T, double k, int n_max);

    double mu() const noexcept { return mu_; }
    double T() const noexcept { return T_; }
    double k() const noexcept { return k_; }
    int n_max() const noexcept { return n_max_; }
    int nodes() const noexcept { return nodes_; }
    double node(int i) const noexcept { return x_[i]; }
    /// Cell masses of the composed distribution for a flip mask, (+,+) start.
    const std::vector<double> &masses(int flip_mask) const noexcept { return h_[flip_mask]; }
    const GaussianTable &gaussian() const noexcept { return gauss_; }

    /// P(m | next, prev) as a Riemann sum over the node grid.
    double density(const MeasurementPair &m, StateIndex next, StateIndex prev) const;
    /// All 64 values at once: out[prev][next].
    void densities(const MeasurementPair &m, Matrix8 &out) const;

   private:
    double mu_;
    double T_;
    double k_;
    int n_max_;
    int nodes_;
    std::vector<double> x_;
    std::array<std::vector<double>, 8> h_;
    std::array<std::vector<int>, 8> rows_;  // rows holding any mass
    GaussianTable gauss_;
};

double measurement_density(const MeasurementPair &m, StateIndex next, StateIndex prev,
                           const MeasurementDensityTable &tables);

/// Numerically exact Bayesian filter, normalized every step.
class OptimalFilter {
   public:
    OptimalFilter(std::shared_ptr<const MeasurementDensityTable> tables, StateIndex initial = StateIndex(0));

    void reset(StateIndex initial);
    /// Replaces the prior; `p` must be non-negative with a positive sum.
    void set_posterior(const Vector8 &p);
    /// Folds in one measurement and returns the new most likely state.
    StateIndex update(const MeasurementPair &m);

    const Vector8 &posterior() const noexcept { return p_; }
    StateIndex predicted() const noexcept;
    const MeasurementDensityTable &tables() const noexcept { return *tables_; }

   private:
    std::shared_ptr<const MeasurementDensityTable> tables_;
    TransitionMatrix j_;
    Vector8 p_{};
    Matrix8 dens_{};
};

struct FilterStep {
    Vector8 posterior;
    StateIndex predicted;
};

/// Filters a whole trajectory from a point mass on its initial state.
std::vector<FilterStep> run_optimal(const TrajectoryRecord &trajectory,
                                    std::shared_ptr<const MeasurementDensityTable> tables);

}  // namespace qecf

#endif
