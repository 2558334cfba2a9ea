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

#include "qecfilter/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace qecf {

namespace {

constexpr const char *kCodeVersion = "0.1.0";

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void write_text(const std::string &path, const std::string &text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        fail(ErrorKind::Io, "cannot open output file: " + path);
    }
    os << text;
    if (!os) {
        fail(ErrorKind::Io, "failed writing output file: " + path);
    }
}

std::ofstream open_out(const std::string &path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        fail(ErrorKind::Io, "cannot open output file: " + path);
    }
    return os;
}

// Type-erased filter so a worker can drive any mix of filters in lockstep.
class Runner {
   public:
    virtual ~Runner() = default;
    virtual void reset(StateIndex initial) = 0;
    virtual StateIndex step(const MeasurementPair &m) = 0;
};

template <typename F>
class RunnerOf final : public Runner {
   public:
    explicit RunnerOf(F f) : f_(std::move(f)) {}
    void reset(StateIndex initial) override { f_.reset(initial); }
    StateIndex step(const MeasurementPair &m) override { return f_.step(m); }

   private:
    F f_;
};

class OptimalRunner final : public Runner {
   public:
    explicit OptimalRunner(std::shared_ptr<const MeasurementDensityTable> t) : f_(std::move(t)) {}
    void reset(StateIndex initial) override { f_.reset(initial); }
    StateIndex step(const MeasurementPair &m) override { return f_.update(m); }

   private:
    OptimalFilter f_;
};

std::unique_ptr<Runner> make_runner(FilterKind kind, const RunConfig &cfg, const ExperimentSpec &spec,
                                    const std::shared_ptr<const MeasurementDensityTable> &tables) {
    switch (kind) {
        case FilterKind::Optimal:
            return std::make_unique<OptimalRunner>(tables);
        case FilterKind::TwoTerm: {
            LogFilterConfig c;
            c.mode = LogMode::TwoTerm;
            return std::make_unique<RunnerOf<LogFilter>>(LogFilter(cfg, c));
        }
        case FilterKind::OneTerm: {
            LogFilterConfig c;
            c.mode = LogMode::OneTerm;
            return std::make_unique<RunnerOf<LogFilter>>(LogFilter(cfg, c));
        }
        case FilterKind::Wonham:
            return std::make_unique<RunnerOf<WonhamFilter>>(WonhamFilter(cfg));
        case FilterKind::Threshold:
            return std::make_unique<RunnerOf<ThresholdFilter>>(ThresholdFilter(cfg, spec.threshold));
    }
    fail(ErrorKind::InvalidArgument, "unknown filter kind");
}

bool has_optimal(const ExperimentSpec &spec) {
    return std::find(spec.filters.begin(), spec.filters.end(), FilterKind::Optimal) != spec.filters.end();
}

}  // namespace

const char *filter_name(FilterKind kind) noexcept {
    switch (kind) {
        case FilterKind::Optimal:
            return "optimal";
        case FilterKind::TwoTerm:
            return "two_term";
        case FilterKind::OneTerm:
            return "one_term";
        case FilterKind::Wonham:
            return "wonham";
        case FilterKind::Threshold:
            return "threshold";
    }
    return "?";
}

FilterKind parse_filter(const std::string &name) {
    for (auto k : {FilterKind::Optimal, FilterKind::TwoTerm, FilterKind::OneTerm, FilterKind::Wonham,
                   FilterKind::Threshold}) {
        if (name == filter_name(k)) {
            return k;
        }
    }
    fail(ErrorKind::InvalidArgument, "unknown filter '" + name + "'");
}

std::vector<FilterKind> parse_filter_list(const std::string &list) {
    if (list == "all") {
        return {FilterKind::Optimal, FilterKind::TwoTerm, FilterKind::OneTerm, FilterKind::Wonham,
                FilterKind::Threshold};
    }
    std::vector<FilterKind> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) {
            continue;
        }
        auto k = parse_filter(item);
        if (std::find(out.begin(), out.end(), k) == out.end()) {
            out.push_back(k);
        }
    }
    if (out.empty()) {
        fail(ErrorKind::InvalidArgument, "no filters selected");
    }
    return out;
}

const char *axis_name(SweepAxis axis) noexcept {
    switch (axis) {
        case SweepAxis::Duration:
            return "duration";
        case SweepAxis::ErrorRate:
            return "error_rate";
        case SweepAxis::TimeStep:
            return "time_step";
    }
    return "?";
}

SweepAxis parse_axis(const std::string &name) {
    for (auto a : {SweepAxis::Duration, SweepAxis::ErrorRate, SweepAxis::TimeStep}) {
        if (name == axis_name(a)) {
            return a;
        }
    }
    fail(ErrorKind::InvalidArgument, "unknown sweep axis '" + name + "'");
}

void ExperimentSpec::validate() const {
    if (values.empty()) {
        fail(ErrorKind::InvalidArgument, "sweep needs at least one axis value");
    }
    for (size_t i = 0; i < values.size(); i++) {
        if (!(values[i] > 0) || !std::isfinite(values[i])) {
            fail(ErrorKind::InvalidArgument, "axis values must be positive");
        }
        if (i > 0 && !(values[i] > values[i - 1])) {
            fail(ErrorKind::InvalidArgument, "axis values must be strictly increasing");
        }
    }
    if (filters.empty()) {
        fail(ErrorKind::InvalidArgument, "no filters selected");
    }
    if (fixed.trials == 0) {
        fail(ErrorKind::InvalidArgument, "trials must be positive");
    }
    threshold.validate();
    for (size_t i = 0; i < values.size(); i++) {
        config_at(i).validate();
    }
}

RunConfig ExperimentSpec::config_at(size_t index) const {
    RunConfig c = fixed;
    double v = values.at(index);
    switch (axis) {
        case SweepAxis::Duration:
            c.duration = v;
            break;
        case SweepAxis::ErrorRate:
            c.mu = v;
            break;
        case SweepAxis::TimeStep:
            c.T = v;
            break;
    }
    return c;
}

int score(StateIndex predicted, StateIndex truth) noexcept { return hamming(predicted, truth) <= 1 ? 1 : 0; }

double bernoulli_stderr(double p, uint64_t n) noexcept {
    if (n == 0) {
        return 0;
    }
    return std::sqrt(std::max(0.0, p * (1 - p)) / static_cast<double>(n));
}

void parallel_for(uint64_t count, unsigned threads, const std::function<void(unsigned, uint64_t)> &fn) {
    threads = std::max(1u, threads);
    if (count < threads) {
        threads = static_cast<unsigned>(std::max<uint64_t>(1, count));
    }
    std::atomic<uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::atomic<bool> stop{false};
    auto worker = [&](unsigned w) {
        try {
            for (uint64_t i = next++; i < count && !stop; i = next++) {
                fn(w, i);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mu);
            if (!error) {
                error = std::current_exception();
            }
            stop = true;
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; w++) {
            pool.emplace_back(worker, w);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

ExperimentResult run_experiment(const ExperimentSpec &spec, const ProgressFn &progress) {
    spec.validate();
    ExperimentResult result;
    result.spec = spec;
    const unsigned threads = std::max(1u, spec.threads);

    HistogramSet histograms;
    if (has_optimal(spec)) {
        double max_mu_T = 0;
        for (size_t i = 0; i < spec.values.size(); i++) {
            max_mu_T = std::max(max_mu_T, spec.config_at(i).mu_T());
        }
        result.n_max = choose_n_max(max_mu_T, spec.histograms.tail);
        if (progress) {
            progress("histograms: n=" + std::to_string(spec.histograms.n) +
                     " samples=" + std::to_string(spec.histograms.samples) +
                     " n_max=" + std::to_string(result.n_max));
        }
        histograms = HistogramSet::cached(spec.histograms.cache_dir, spec.histograms.n, spec.histograms.samples,
                                          spec.histograms.seed, result.n_max, threads);
    }

    const size_t nf = spec.filters.size();
    for (size_t ai = 0; ai < spec.values.size(); ai++) {
        const RunConfig cfg = spec.config_at(ai);
        std::shared_ptr<const MeasurementDensityTable> tables;
        if (has_optimal(spec)) {
            try {
                tables = std::make_shared<MeasurementDensityTable>(histograms, cfg.mu, cfg.T, cfg.k, result.n_max);
            } catch (const Error &e) {
                fail(e.kind(), std::string("axis value ") + fmt(spec.values[ai]) + ": " + e.what());
            }
        }
        std::vector<std::vector<std::unique_ptr<Runner>>> banks(threads);
        for (auto &bank : banks) {
            for (auto kind : spec.filters) {
                bank.push_back(make_runner(kind, cfg, spec, tables));
            }
        }
        std::vector<std::vector<uint64_t>> correct(threads, std::vector<uint64_t>(nf, 0));
        std::vector<uint64_t> scored(threads, 0);
        const StateIndex initial(cfg.initial_state);
        const bool per_step = spec.per_step_scoring;

        parallel_for(cfg.trials, threads, [&](unsigned w, uint64_t trial) {
            auto &bank = banks[w];
            auto &tally = correct[w];
            for (auto &f : bank) {
                f->reset(initial);
            }
            TrajectoryStream stream(cfg, trajectory_rng(cfg.seed, trial, ai));
            std::vector<StateIndex> preds(nf, initial);
            Interval iv;
            while (!stream.done()) {
                iv = stream.next();
                for (size_t f = 0; f < nf; f++) {
                    preds[f] = bank[f]->step(iv.measurement);
                }
                if (per_step) {
                    for (size_t f = 0; f < nf; f++) {
                        tally[f] += score(preds[f], iv.end);
                    }
                    scored[w]++;
                }
            }
            if (!per_step) {
                for (size_t f = 0; f < nf; f++) {
                    tally[f] += score(preds[f], iv.end);
                }
                scored[w]++;
            }
        });

        uint64_t n = 0;
        for (auto s : scored) {
            n += s;
        }
        for (size_t f = 0; f < nf; f++) {
            uint64_t c = 0;
            for (unsigned w = 0; w < threads; w++) {
                c += correct[w][f];
            }
            ResultRow row;
            row.filter = filter_name(spec.filters[f]);
            row.axis = axis_name(spec.axis);
            row.axis_value = spec.values[ai];
            double acc = static_cast<double>(c) / static_cast<double>(n);
            row.inaccuracy = 1 - acc;
            row.stderr_ = bernoulli_stderr(acc, n);
            row.trials = cfg.trials;
            row.mu = cfg.mu;
            row.T = cfg.T;
            row.k = cfg.k;
            row.duration = cfg.effective_duration();
            row.seed = cfg.seed;
            row.steps = cfg.steps();
            result.rows.push_back(row);
            if (progress) {
                progress(row.axis + "=" + fmt(row.axis_value) + " " + row.filter + " inaccuracy=" +
                         fmt(row.inaccuracy) + " se=" + fmt(row.stderr_));
            }
        }
    }
    return result;
}

const char *const kCsvHeader = "filter,axis,axis_value,inaccuracy,stderr,trials,mu,T,k,duration,seed";

std::string results_csv(const std::vector<ResultRow> &rows) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto &r : rows) {
        out += r.filter + ',' + r.axis + ',' + fmt(r.axis_value) + ',' + fmt(r.inaccuracy) + ',' + fmt(r.stderr_) +
               ',' + std::to_string(r.trials) + ',' + fmt(r.mu) + ',' + fmt(r.T) + ',' + fmt(r.k) + ',' +
               fmt(r.duration) + ',' + std::to_string(r.seed) + '\n';
    }
    return out;
}

void write_results_csv(const std::string &path, const std::vector<ResultRow> &rows) {
    write_text(path, results_csv(rows));
}

std::string results_metadata_json(const ExperimentResult &result) {
    using nlohmann::json;
    const auto &s = result.spec;
    json j;
    j["code_version"] = kCodeVersion;
    j["csv_header"] = kCsvHeader;
    j["sweep"] = {{"axis", axis_name(s.axis)}, {"values", s.values}};
    j["fixed"] = {{"mu", s.fixed.mu},         {"T", s.fixed.T},
                  {"k", s.fixed.k},           {"duration", s.fixed.duration},
                  {"seed", s.fixed.seed},     {"trials", s.fixed.trials},
                  {"initial_state", s.fixed.initial_state}};
    std::vector<std::string> names;
    for (auto f : s.filters) {
        names.push_back(filter_name(f));
    }
    j["filters"] = names;
    j["threads"] = s.threads;
    j["scoring"] = s.per_step_scoring ? "per_step" : "final_step";
    j["threshold"] = {{"ema_time_constant_us", s.threshold.ema_time_constant},
                      {"eta_low", s.threshold.eta_low},
                      {"eta_high", s.threshold.eta_high},
                      {"selection_grid",
                       {{"ema_time_constant_us", {0.1, 0.25, 0.5, 1, 2, 4}},
                        {"eta_low", {-0.5, -0.25, 0, 0.25}},
                        {"eta_high", {0.25, 0.5, 0.75}}}}};
    j["wonham"] = {{"negative_entries", "reflect"}, {"normalized_every_step", true}};
    j["log_filters"] = {{"delta_correction", true}, {"softplus_knots", 1024}, {"clamp_floor", -1e6}};
    if (result.n_max > 0) {
        j["histograms"] = {{"n", s.histograms.n},
                           {"samples", s.histograms.samples},
                           {"seed", s.histograms.seed},
                           {"tail", s.histograms.tail},
                           {"n_max", result.n_max},
                           {"cache_file", HistogramSet::cache_file_name(s.histograms.n, s.histograms.samples,
                                                                        s.histograms.seed)}};
    }
    json steps = json::array();
    for (size_t i = 0; i < s.values.size(); i++) {
        auto c = s.config_at(i);
        steps.push_back({{"axis_value", s.values[i]}, {"steps", c.steps()}, {"duration", c.effective_duration()}});
    }
    j["effective"] = steps;
    return j.dump(2) + "\n";
}

void write_results_metadata(const std::string &path, const ExperimentResult &result) {
    write_text(path, results_metadata_json(result));
}

void dump_trajectories(const RunConfig &config, uint32_t trials, const std::string &intervals_path,
                       const std::string &events_path) {
    config.validate();
    auto iv = open_out(intervals_path);
    auto ev = open_out(events_path);
    iv << "trial,i,true_state,s1bar,s2bar,m1,m2\n";
    ev << "trial,qubit,time_us\n";
    for (uint32_t t = 0; t < trials; t++) {
        auto rec = simulate_trajectory(config, static_cast<uint64_t>(t));
        for (size_t i = 0; i < rec.size(); i++) {
            iv << t << ',' << i << ',' << rec.states[i].value() << ',' << fmt(rec.means[i].s1bar) << ','
               << fmt(rec.means[i].s2bar) << ',' << fmt(rec.measurements[i].m1) << ','
               << fmt(rec.measurements[i].m2) << '\n';
        }
        for (const auto &e : rec.events) {
            ev << t << ',' << e.qubit << ',' << fmt(e.time) << '\n';
        }
    }
    if (!iv || !ev) {
        fail(ErrorKind::Io, "failed writing trajectory dump");
    }
}

namespace {

struct DiagAccum {
    std::vector<Matrix8> rel_L, sig;
    std::vector<Vector8> lp;
    std::vector<double> unc, unc2, cor, cor2, won, agree;

    explicit DiagAccum(uint64_t steps)
        : rel_L(steps, Matrix8{}),
          sig(steps, Matrix8{}),
          lp(steps, Vector8{}),
          unc(steps),
          unc2(steps),
          cor(steps),
          cor2(steps),
          won(steps),
          agree(steps) {}
};

double max_abs(const Vector8 &v) {
    double m = 0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

}  // namespace

DiagnosticsResult diagnostics_run(const RunConfig &config, uint32_t trials, const DiagnosticsOptions &options,
                                  unsigned threads) {
    config.validate();
    if (trials == 0) {
        fail(ErrorKind::InvalidArgument, "diagnostics needs at least one trial");
    }
    threads = std::max(1u, threads);
    const uint64_t steps = config.steps();
    std::vector<DiagAccum> acc;
    acc.reserve(threads);
    for (unsigned w = 0; w < threads; w++) {
        acc.emplace_back(steps);
    }
    LogFilterConfig corrected_cfg;
    corrected_cfg.mode = options.mode;
    LogFilterConfig raw_cfg = corrected_cfg;
    raw_cfg.apply_delta_correction = false;
    const RateMatrix q = rate_matrix(config.mu);
    const StateIndex initial(config.initial_state);

    parallel_for(trials, threads, [&](unsigned w, uint64_t trial) {
        auto &a = acc[w];
        LogFilter corrected(config, corrected_cfg);
        LogFilter raw(config, raw_cfg);
        WonhamState won;
        won.p[initial.value()] = 1;
        double won_log10 = 0;
        Rng rng(config.seed, StreamTag::Diagnostics, {trial});
        std::optional<TrajectoryStream> stream;
        if (options.use_schedule) {
            stream.emplace(config, options.schedule, std::move(rng));
        } else {
            stream.emplace(config, std::move(rng));
        }
        for (uint64_t i = 0; i < steps; i++) {
            auto iv = stream->next();
            auto terms = corrected.build_L(iv.measurement);
            for (int b = 0; b < 8; b++) {
                double top = -INFINITY;
                for (int p = 0; p < 8; p++) {
                    top = std::max(top, terms.L[p][b]);
                }
                for (int p = 0; p < 8; p++) {
                    double rel = terms.L[p][b] - top;
                    a.rel_L[i][p][b] += rel;
                    a.sig[i][p][b] += rel > options.significance ? 1.0 : 0.0;
                }
            }
            corrected.set_state(corrected.advance(corrected.state(), terms));
            raw.step(iv.measurement);
            const auto &lp = corrected.state().lp;
            double top = *std::max_element(lp.begin(), lp.end());
            double sum = 0;
            for (double x : lp) {
                sum += std::exp(x - top);
            }
            double lse = top + std::log(sum);
            for (int s = 0; s < 8; s++) {
                a.lp[i][s] += lp[s] - lse;
            }
            double u = max_abs(raw.state().lp);
            double c = max_abs(lp);
            a.unc[i] += u;
            a.unc2[i] += u * u;
            a.cor[i] += c;
            a.cor2[i] += c * c;
            a.agree[i] += raw.predicted() == corrected.predicted() ? 1.0 : 0.0;
            wonham_step(won, iv.measurement, q, config.k, config.T, false);
            double total = 0;
            for (double x : won.p) {
                total += x;
            }
            won_log10 += std::log10(total);
            double mx = 0;
            for (double &x : won.p) {
                x /= total;
                mx = std::max(mx, x);
            }
            a.won[i] += won_log10 + std::log10(mx);
        }
    });

    DiagnosticsResult r;
    r.config = config;
    r.trials = trials;
    r.steps = steps;
    r.delta = delta_correction(config.mu, config.T, config.k);
    const double n = trials;
    r.mean_relative_L.assign(steps, Matrix8{});
    r.significant_fraction.assign(steps, Matrix8{});
    r.mean_log_posterior.assign(steps, Vector8{});
    r.uncorrected_mean.assign(steps, 0);
    r.uncorrected_sd.assign(steps, 0);
    r.corrected_mean.assign(steps, 0);
    r.corrected_sd.assign(steps, 0);
    r.wonham_log10_mean.assign(steps, 0);
    r.argmax_agreement.assign(steps, 0);
    for (uint64_t i = 0; i < steps; i++) {
        double u = 0, u2 = 0, c = 0, c2 = 0;
        for (const auto &a : acc) {
            for (int p = 0; p < 8; p++) {
                for (int b = 0; b < 8; b++) {
                    r.mean_relative_L[i][p][b] += a.rel_L[i][p][b] / n;
                    r.significant_fraction[i][p][b] += a.sig[i][p][b] / n;
                }
                r.mean_log_posterior[i][p] += a.lp[i][p] / n;
            }
            u += a.unc[i];
            u2 += a.unc2[i];
            c += a.cor[i];
            c2 += a.cor2[i];
            r.wonham_log10_mean[i] += a.won[i] / n;
            r.argmax_agreement[i] += a.agree[i] / n;
        }
        r.uncorrected_mean[i] = u / n;
        r.uncorrected_sd[i] = std::sqrt(std::max(0.0, u2 / n - (u / n) * (u / n)));
        r.corrected_mean[i] = c / n;
        r.corrected_sd[i] = std::sqrt(std::max(0.0, c2 / n - (c / n) * (c / n)));
    }
    return r;
}

void write_diagnostics(const std::string &prefix, const DiagnosticsResult &r) {
    const double T = r.config.T;
    {
        auto os = open_out(prefix + "_L.csv");
        os << "step,time_us,prev,next,mean_relative_L,significant_fraction\n";
        for (uint64_t i = 0; i < r.steps; i++) {
            for (int p = 0; p < 8; p++) {
                for (int b = 0; b < 8; b++) {
                    os << i << ',' << fmt((i + 1) * T) << ',' << p << ',' << b << ','
                       << fmt(r.mean_relative_L[i][p][b]) << ',' << fmt(r.significant_fraction[i][p][b]) << '\n';
                }
            }
        }
    }
    {
        auto os = open_out(prefix + "_posterior.csv");
        os << "step,time_us,state,mean_log_posterior\n";
        for (uint64_t i = 0; i < r.steps; i++) {
            for (int s = 0; s < 8; s++) {
                os << i << ',' << fmt((i + 1) * T) << ',' << s << ',' << fmt(r.mean_log_posterior[i][s]) << '\n';
            }
        }
    }
    {
        auto os = open_out(prefix + "_norms.csv");
        os << "step,time_us,uncorrected_mean,uncorrected_sd,corrected_mean,corrected_sd,wonham_log10_max,"
              "argmax_agreement\n";
        for (uint64_t i = 0; i < r.steps; i++) {
            os << i << ',' << fmt((i + 1) * T) << ',' << fmt(r.uncorrected_mean[i]) << ','
               << fmt(r.uncorrected_sd[i]) << ',' << fmt(r.corrected_mean[i]) << ',' << fmt(r.corrected_sd[i])
               << ',' << fmt(r.wonham_log10_mean[i]) << ',' << fmt(r.argmax_agreement[i]) << '\n';
        }
        if (!os) {
            fail(ErrorKind::Io, "failed writing diagnostics");
        }
    }
}

ThresholdSearch tune_threshold(const RunConfig &config, const std::vector<double> &taus,
                               const std::vector<double> &lows, const std::vector<double> &highs, unsigned threads) {
    config.validate();
    std::vector<ThresholdParams> grid;
    for (double t : taus) {
        for (double lo : lows) {
            for (double hi : highs) {
                if (lo < hi) {
                    grid.push_back({t, lo, hi});
                }
            }
        }
    }
    if (grid.empty()) {
        fail(ErrorKind::InvalidArgument, "empty threshold grid");
    }
    threads = std::max(1u, threads);
    std::vector<std::vector<uint64_t>> correct(threads, std::vector<uint64_t>(grid.size(), 0));
    std::vector<std::vector<ThresholdFilter>> banks(threads);
    for (auto &bank : banks) {
        for (const auto &p : grid) {
            bank.emplace_back(config, p);
        }
    }
    const StateIndex initial(config.initial_state);
    parallel_for(config.trials, threads, [&](unsigned w, uint64_t trial) {
        auto &bank = banks[w];
        for (auto &f : bank) {
            f.reset(initial);
        }
        TrajectoryStream stream(config, trajectory_rng(config.seed, trial));
        Interval iv;
        while (!stream.done()) {
            iv = stream.next();
            for (auto &f : bank) {
                f.step(iv.measurement);
            }
        }
        for (size_t g = 0; g < grid.size(); g++) {
            correct[w][g] += score(bank[g].predicted(), iv.end);
        }
    });
    ThresholdSearch out;
    for (size_t g = 0; g < grid.size(); g++) {
        uint64_t c = 0;
        for (unsigned w = 0; w < threads; w++) {
            c += correct[w][g];
        }
        double inacc = 1 - static_cast<double>(c) / config.trials;
        out.entries.push_back({grid[g], inacc});
        if (g == 0 || inacc < out.best_inaccuracy) {
            out.best = grid[g];
            out.best_inaccuracy = inacc;
        }
    }
    return out;
}

}  // namespace qecf
