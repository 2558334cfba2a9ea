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

#ifndef QECFILTER_SYND_DENSITY_HPP
#define QECFILTER_SYND_DENSITY_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qecfilter/core.hpp"
#include "qecfilter/rng.hpp"
#include "qecfilter/simulator.hpp"

namespace qecf {

/// Density of one syndrome mean after N >= 1 errors on a single qubit: a Beta
/// law in (1 +- sbar)/2 with exponents N//2 and (N-1)//2.
double single_qubit_density(double sbar, int N, int start_sign);

/// Joint density of (s1bar, s2bar) from |000> with exactly one error on each
/// qubit: (1 + min(s1, s2) + max(0, s1 + s2)) / 4.
double piecewise_density_111(double s1bar, double s2bar);

/// Joint distribution of the two syndrome means on [-1, 1]^2.
///
/// Each axis has 2n+2 nodes: an atom at -1, 2n bins of width 1/n, and an atom
/// at +1. Atoms hold the exact point masses of axes that saw no relevant flip;
/// bins hold the continuous part. Cell values are probability masses.
class SyndromeHistogram2D {
   public:
    SyndromeHistogram2D() = default;
    SyndromeHistogram2D(int n, ErrorCounts signature);

    int n() const noexcept { return n_; }
    int nodes() const noexcept { return 2 * n_ + 2; }
    /// Evaluation point of node i: -1, bin centers, +1.
    double node(int i) const noexcept;
    double mass(int i, int j) const noexcept { return mass_[static_cast<size_t>(i) * nodes() + j]; }
    double &mass(int i, int j) noexcept { return mass_[static_cast<size_t>(i) * nodes() + j]; }
    std::span<const double> masses() const noexcept { return mass_; }
    std::span<double> masses() noexcept { return mass_; }
    double total_mass() const noexcept;

    const ErrorCounts &error_signature() const noexcept { return signature_; }
    uint64_t counts_total() const noexcept { return counts_total_; }
    void set_counts_total(uint64_t c) noexcept { counts_total_ = c; }

    /// Node index receiving a syndrome mean; `atom` marks an exact +-1 value.
    int node_of(double s, bool atom) const noexcept;

    /// Density on the plain 2n x 2n grid (row-major, s1 major), with atoms
    /// folded into the boundary bins. Sums to n^2.
    std::vector<double> density_grid() const;
    /// Density grid cell containing (s1, s2).
    double density_at(double s1, double s2) const;

    /// Marginal masses over nodes of one axis (0 or 1).
    std::vector<double> marginal(int axis) const;

    SyndromeHistogram2D reflected(bool flip_s1, bool flip_s2) const;
    SyndromeHistogram2D transposed() const;
    void add_scaled(const SyndromeHistogram2D &other, double weight);
    void scale(double factor);

   private:
    int n_ = 0;
    ErrorCounts signature_;
    uint64_t counts_total_ = 0;
    std::vector<double> mass_;
};

/// Monte Carlo histogram of syndrome means from |000> with the given counts.
SyndromeHistogram2D estimate_histogram(ErrorCounts counts, int n, uint64_t samples, Rng &rng);

/// All signatures with e1 + e2 + e3 <= n_max, in lexicographic order.
std::vector<ErrorCounts> signatures_up_to(int n_max);

/// Smallest cutoff (at least 3) with P(e1 + e2 + e3 > N) < tail at the given mu*T.
int choose_n_max(double mu_T, double tail = 1e-6);

/// P(e | parity) for a Poisson(mu_T) count restricted to one parity.
double conditional_count_probability(int e, bool odd, double mu_T);

/// Probability mass of the retained signatures for a flip mask.
double retained_probability(int flip_mask, double mu_T, int n_max);

/// Reference histograms for every signature up to a cutoff, plus the keys
/// they were generated with.
class HistogramSet {
   public:
    HistogramSet() = default;
    HistogramSet(int n, uint64_t samples, uint64_t seed) : n_(n), samples_(samples), seed_(seed) {}

    /// Samples every missing signature up to n_max. Each signature has its own
    /// random stream keyed by (seed, signature).
    void build(int n_max, unsigned threads = 1);

    int n() const noexcept { return n_; }
    uint64_t samples() const noexcept { return samples_; }
    uint64_t seed() const noexcept { return seed_; }
    int max_total() const noexcept;
    bool contains(ErrorCounts sig) const;
    const SyndromeHistogram2D &at(ErrorCounts sig) const;
    void insert(SyndromeHistogram2D hist);
    size_t size() const noexcept { return hists_.size(); }
    std::vector<ErrorCounts> keys() const;

    /// Binary cache file: magic, version, n, samples, seed, record count, then
    /// per record the signature, sample count and row-major cell masses.
    void save(const std::string &path) const;
    static HistogramSet load(const std::string &path);
    static constexpr uint32_t kFileVersion = 1;

    /// Loads `dir/hist_n{n}_s{samples}_seed{seed}.bin` if it covers n_max,
    /// otherwise builds the missing signatures and rewrites the file.
    static HistogramSet cached(const std::string &dir, int n, uint64_t samples, uint64_t seed, int n_max,
                               unsigned threads = 1);
    static std::string cache_file_name(int n, uint64_t samples, uint64_t seed);

   private:
    static uint64_t key(ErrorCounts c);
    int n_ = 25;
    uint64_t samples_ = 0;
    uint64_t seed_ = 0;
    std::map<uint64_t, SyndromeHistogram2D> hists_;
};

/// Distribution of the syndrome means given the interval's start and end
/// states: the parity-compatible reference histograms weighted by their
/// conditional Poisson probabilities, renormalized over the retained terms and
/// reflected to the start state's syndrome signs.
SyndromeHistogram2D compose_conditional_density(StateIndex next, StateIndex prev, double mu, double T,
                                                const HistogramSet &histograms, int n_max);

}  // namespace qecf

#endif
