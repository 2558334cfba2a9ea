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

#include "qecfilter/synd_density.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <thread>

#include "qecfilter/markov.hpp"

namespace qecf {

double single_qubit_density(double sbar, int N, int start_sign) {
    if (N < 1) {
        fail(ErrorKind::InvalidArgument, "single_qubit_density needs N >= 1 (N = 0 is a point mass)");
    }
    if (start_sign != 1 && start_sign != -1) {
        fail(ErrorKind::InvalidArgument, "start_sign must be +1 or -1");
    }
    if (!(sbar >= -1 && sbar <= 1)) {
        return 0;
    }
    int a = N / 2;
    int b = (N - 1) / 2;
    double toward = (1 + start_sign * sbar) / 2;
    double away = (1 - start_sign * sbar) / 2;
    double log_norm = std::lgamma(N + 1.0) - std::log(2.0) - std::lgamma(a + 1.0) - std::lgamma(b + 1.0);
    return std::exp(log_norm) * std::pow(toward, a) * std::pow(away, b);
}

double piecewise_density_111(double s1bar, double s2bar) {
    if (!(s1bar >= -1 && s1bar <= 1 && s2bar >= -1 && s2bar <= 1)) {
        return 0;
    }
    double v = 0.25 * (1 + std::min(s1bar, s2bar) + std::max(0.0, s1bar + s2bar));
    return std::max(0.0, v);
}

SyndromeHistogram2D::SyndromeHistogram2D(int n, ErrorCounts signature) : n_(n), signature_(signature) {
    if (n < 1) {
        fail(ErrorKind::InvalidArgument, "histogram half-resolution must be positive");
    }
    mass_.assign(static_cast<size_t>(nodes()) * nodes(), 0.0);
}

double SyndromeHistogram2D::node(int i) const noexcept {
    if (i <= 0) {
        return -1.0;
    }
    if (i >= 2 * n_ + 1) {
        return 1.0;
    }
    return -1.0 + (i - 0.5) / n_;
}

int SyndromeHistogram2D::node_of(double s, bool atom) const noexcept {
    if (atom) {
        return s > 0 ? 2 * n_ + 1 : 0;
    }
    int b = static_cast<int>(std::floor((s + 1.0) * n_));
    return std::clamp(b, 0, 2 * n_ - 1) + 1;
}

double SyndromeHistogram2D::total_mass() const noexcept {
    double t = 0;
    for (double m : mass_) {
        t += m;
    }
    return t;
}

std::vector<double> SyndromeHistogram2D::density_grid() const {
    const int bins = 2 * n_;
    std::vector<double> grid(static_cast<size_t>(bins) * bins, 0.0);
    auto fold = [&](int i) { return std::clamp(i - 1, 0, bins - 1); };
    const double scale = static_cast<double>(n_) * n_;
    for (int i = 0; i < nodes(); i++) {
        for (int j = 0; j < nodes(); j++) {
            grid[static_cast<size_t>(fold(i)) * bins + fold(j)] += mass(i, j) * scale;
        }
    }
    return grid;
}

double SyndromeHistogram2D::density_at(double s1, double s2) const {
    const int bins = 2 * n_;
    auto bin = [&](double s) { return std::clamp(static_cast<int>(std::floor((s + 1.0) * n_)), 0, bins - 1); };
    int b1 = bin(s1);
    int b2 = bin(s2);
    double total = 0;
    for (int i = 0; i < nodes(); i++) {
        if (std::clamp(i - 1, 0, bins - 1) != b1) {
            continue;
        }
        for (int j = 0; j < nodes(); j++) {
            if (std::clamp(j - 1, 0, bins - 1) == b2) {
                total += mass(i, j);
            }
        }
    }
    return total * n_ * n_;
}

std::vector<double> SyndromeHistogram2D::marginal(int axis) const {
    std::vector<double> out(nodes(), 0.0);
    for (int i = 0; i < nodes(); i++) {
        for (int j = 0; j < nodes(); j++) {
            out[axis == 0 ? i : j] += mass(i, j);
        }
    }
    return out;
}

SyndromeHistogram2D SyndromeHistogram2D::reflected(bool flip_s1, bool flip_s2) const {
    SyndromeHistogram2D out(*this);
    const int last = nodes() - 1;
    for (int i = 0; i < nodes(); i++) {
        for (int j = 0; j < nodes(); j++) {
            out.mass(flip_s1 ? last - i : i, flip_s2 ? last - j : j) = mass(i, j);
        }
    }
    return out;
}

SyndromeHistogram2D SyndromeHistogram2D::transposed() const {
    SyndromeHistogram2D out(n_, {signature_.e3, signature_.e2, signature_.e1});
    out.counts_total_ = counts_total_;
    for (int i = 0; i < nodes(); i++) {
        for (int j = 0; j < nodes(); j++) {
            out.mass(j, i) = mass(i, j);
        }
    }
    return out;
}

void SyndromeHistogram2D::add_scaled(const SyndromeHistogram2D &other, double weight) {
    if (other.n_ != n_) {
        fail(ErrorKind::InvalidArgument, "histogram resolutions differ");
    }
    for (size_t i = 0; i < mass_.size(); i++) {
        mass_[i] += weight * other.mass_[i];
    }
}

void SyndromeHistogram2D::scale(double factor) {
    for (double &m : mass_) {
        m *= factor;
    }
}

SyndromeHistogram2D estimate_histogram(ErrorCounts counts, int n, uint64_t samples, Rng &rng) {
    if (n < 8) {
        fail(ErrorKind::InvalidArgument, "histogram half-resolution must be at least 8");
    }
    if (samples < 10000) {
        fail(ErrorKind::InvalidArgument, "histogram needs at least 1e4 samples");
    }
    if (counts.e1 < 0 || counts.e2 < 0 || counts.e3 < 0) {
        fail(ErrorKind::InvalidArgument, "error counts must be non-negative");
    }
    SyndromeHistogram2D hist(n, counts);
    hist.set_counts_total(samples);
    const bool atom1 = counts.e1 + counts.e2 == 0;
    const bool atom2 = counts.e2 + counts.e3 == 0;
    std::array<std::vector<double>, 3> times;
    for (int q = 0; q < 3; q++) {
        times[q].resize(counts[q + 1]);
    }
    const StateIndex start(0);
    std::vector<uint64_t> tally(hist.masses().size(), 0);
    for (uint64_t s = 0; s < samples; s++) {
        for (auto &t : times) {
            for (double &x : t) {
                x = rng.uniform();
            }
            std::sort(t.begin(), t.end());
        }
        auto means = syndrome_means(start, times[0], times[1], times[2]);
        int i = hist.node_of(means.s1bar, atom1);
        int j = hist.node_of(means.s2bar, atom2);
        tally[static_cast<size_t>(i) * hist.nodes() + j]++;
    }
    auto m = hist.masses();
    for (size_t c = 0; c < m.size(); c++) {
        m[c] = static_cast<double>(tally[c]) / static_cast<double>(samples);
    }
    return hist;
}

std::vector<ErrorCounts> signatures_up_to(int n_max) {
    std::vector<ErrorCounts> out;
    for (int e1 = 0; e1 <= n_max; e1++) {
        for (int e2 = 0; e1 + e2 <= n_max; e2++) {
            for (int e3 = 0; e1 + e2 + e3 <= n_max; e3++) {
                out.push_back({e1, e2, e3});
            }
        }
    }
    return out;
}

int choose_n_max(double mu_T, double tail) {
    if (!(mu_T >= 0)) {
        fail(ErrorKind::InvalidArgument, "mu*T must be non-negative");
    }
    const double lambda = 3 * mu_T;
    double term = std::exp(-lambda);
    double cdf = term;
    int n = 0;
    while (n < 3 || 1 - cdf >= tail) {
        n++;
        term *= lambda / n;
        cdf += term;
        if (n > 200) {
            fail(ErrorKind::InvalidArgument, "error rate too large for a truncated error expansion");
        }
    }
    return n;
}

double conditional_count_probability(int e, bool odd, double mu_T) {
    if (e < 0 || ((e & 1) != 0) != odd) {
        return 0;
    }
    if (mu_T == 0) {
        return e == (odd ? 1 : 0) ? 1.0 : 0.0;
    }
    double log_norm = odd ? log_sinh(mu_T) : log_cosh(mu_T);
    return std::exp(e * std::log(mu_T) - std::lgamma(e + 1.0) - log_norm);
}

namespace {

double signature_weight(ErrorCounts sig, int flip_mask, double mu_T) {
    double w = 1;
    for (int q = 1; q <= 3; q++) {
        w *= conditional_count_probability(sig[q], (flip_mask & qubit_mask(q)) != 0, mu_T);
    }
    return w;
}

}  // namespace

double retained_probability(int flip_mask, double mu_T, int n_max) {
    double total = 0;
    for (auto sig : signatures_up_to(n_max)) {
        total += signature_weight(sig, flip_mask, mu_T);
    }
    return total;
}

uint64_t HistogramSet::key(ErrorCounts c) {
    return (static_cast<uint64_t>(c.e1) << 42) | (static_cast<uint64_t>(c.e2) << 21) | static_cast<uint64_t>(c.e3);
}

int HistogramSet::max_total() const noexcept {
    // Largest N such that every signature with total <= N is present.
    int n = -1;
    while (true) {
        bool all = true;
        for (int e1 = 0; e1 <= n + 1 && all; e1++) {
            for (int e2 = 0; e1 + e2 <= n + 1 && all; e2++) {
                all = contains({e1, e2, n + 1 - e1 - e2});
            }
        }
        if (!all) {
            return n;
        }
        n++;
    }
}

bool HistogramSet::contains(ErrorCounts sig) const { return hists_.count(key(sig)) != 0; }

const SyndromeHistogram2D &HistogramSet::at(ErrorCounts sig) const {
    auto it = hists_.find(key(sig));
    if (it == hists_.end()) {
        fail(ErrorKind::InvalidArgument, "missing histogram for signature (" + std::to_string(sig.e1) + "," +
                                             std::to_string(sig.e2) + "," + std::to_string(sig.e3) + ")");
    }
    return it->second;
}

void HistogramSet::insert(SyndromeHistogram2D hist) {
    if (hist.n() != n_) {
        fail(ErrorKind::InvalidArgument, "histogram resolution does not match the set");
    }
    hists_[key(hist.error_signature())] = std::move(hist);
}

std::vector<ErrorCounts> HistogramSet::keys() const {
    std::vector<ErrorCounts> out;
    for (const auto &[k, h] : hists_) {
        out.push_back(h.error_signature());
    }
    return out;
}

void HistogramSet::build(int n_max, unsigned threads) {
    std::vector<ErrorCounts> todo;
    for (auto sig : signatures_up_to(n_max)) {
        if (!contains(sig)) {
            todo.push_back(sig);
        }
    }
    std::vector<SyndromeHistogram2D> built(todo.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next++; i < todo.size(); i = next++) {
            auto sig = todo[i];
            Rng rng(seed_, StreamTag::Histogram,
                    {static_cast<uint64_t>(sig.e1), static_cast<uint64_t>(sig.e2), static_cast<uint64_t>(sig.e3)});
            built[i] = estimate_histogram(sig, n_, samples_, rng);
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(todo.size())));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; t++) {
            pool.emplace_back(worker);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    for (auto &h : built) {
        insert(std::move(h));
    }
}

namespace {

constexpr char kMagic[8] = {'Q', 'E', 'C', 'F', 'H', 'I', 'S', 'T'};

template <typename T>
void put(std::ostream &os, T v) {
    os.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <typename T>
T get(std::istream &is) {
    T v{};
    is.read(reinterpret_cast<char *>(&v), sizeof(T));
    if (!is) {
        fail(ErrorKind::Io, "histogram cache file is truncated");
    }
    return v;
}

}  // namespace

void HistogramSet::save(const std::string &path) const {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        fail(ErrorKind::Io, "cannot open histogram cache for writing: " + path);
    }
    os.write(kMagic, sizeof(kMagic));
    put<uint32_t>(os, kFileVersion);
    put<uint32_t>(os, static_cast<uint32_t>(n_));
    put<uint64_t>(os, samples_);
    put<uint64_t>(os, seed_);
    put<uint32_t>(os, static_cast<uint32_t>(hists_.size()));
    for (const auto &[k, h] : hists_) {
        const auto &sig = h.error_signature();
        put<int32_t>(os, sig.e1);
        put<int32_t>(os, sig.e2);
        put<int32_t>(os, sig.e3);
        put<uint64_t>(os, h.counts_total());
        auto m = h.masses();
        os.write(reinterpret_cast<const char *>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
    }
    if (!os) {
        fail(ErrorKind::Io, "failed writing histogram cache: " + path);
    }
}

HistogramSet HistogramSet::load(const std::string &path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        fail(ErrorKind::Io, "cannot open histogram cache: " + path);
    }
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        fail(ErrorKind::Io, "not a histogram cache file: " + path);
    }
    auto version = get<uint32_t>(is);
    if (version != kFileVersion) {
        fail(ErrorKind::Io, "unsupported histogram cache version " + std::to_string(version));
    }
    auto n = static_cast<int>(get<uint32_t>(is));
    auto samples = get<uint64_t>(is);
    auto seed = get<uint64_t>(is);
    auto count = get<uint32_t>(is);
    if (n < 1 || n > 4096) {
        fail(ErrorKind::Io, "corrupt histogram cache header");
    }
    HistogramSet set(n, samples, seed);
    for (uint32_t r = 0; r < count; r++) {
        ErrorCounts sig;
        sig.e1 = get<int32_t>(is);
        sig.e2 = get<int32_t>(is);
        sig.e3 = get<int32_t>(is);
        SyndromeHistogram2D h(n, sig);
        h.set_counts_total(get<uint64_t>(is));
        auto m = h.masses();
        is.read(reinterpret_cast<char *>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
        if (!is) {
            fail(ErrorKind::Io, "histogram cache file is truncated");
        }
        set.insert(std::move(h));
    }
    return set;
}

std::string HistogramSet::cache_file_name(int n, uint64_t samples, uint64_t seed) {
    return "hist_n" + std::to_string(n) + "_s" + std::to_string(samples) + "_seed" + std::to_string(seed) + ".bin";
}

HistogramSet HistogramSet::cached(const std::string &dir, int n, uint64_t samples, uint64_t seed, int n_max,
                                  unsigned threads) {
    HistogramSet set(n, samples, seed);
    std::filesystem::path path;
    if (!dir.empty()) {
        path = std::filesystem::path(dir) / cache_file_name(n, samples, seed);
        if (std::filesystem::exists(path)) {
            set = load(path.string());
            if (set.n() != n || set.samples() != samples || set.seed() != seed) {
                fail(ErrorKind::Io, "histogram cache key mismatch in " + path.string());
            }
        }
    }
    if (set.max_total() >= n_max) {
        return set;
    }
    set.build(n_max, threads);
    if (!dir.empty()) {
        std::filesystem::create_directories(dir);
        set.save(path.string());
    }
    return set;
}

SyndromeHistogram2D compose_conditional_density(StateIndex next, StateIndex prev, double mu, double T,
                                                const HistogramSet &histograms, int n_max) {
    if (!(mu > 0) || !(T > 0)) {
        fail(ErrorKind::InvalidArgument, "mu and T must be positive");
    }
    const int mask = prev.value() ^ next.value();
    if (n_max < std::popcount(static_cast<unsigned>(mask))) {
        fail(ErrorKind::InvalidArgument, "error cutoff too small for this transition");
    }
    const double x = mu * T;
    SyndromeHistogram2D out(histograms.n(), {});
    double total = 0;
    for (auto sig : signatures_up_to(n_max)) {
        double w = signature_weight(sig, mask, x);
        if (w == 0) {
            continue;
        }
        out.add_scaled(histograms.at(sig), w);
        total += w;
    }
    out.scale(1.0 / total);
    auto s = syndrome_of(prev);
    return out.reflected(s.s1 < 0, s.s2 < 0);
}

}  // namespace qecf
