#include "lcdsc/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "lcdsc/baselines.hpp"
#include "lcdsc/error.hpp"
#include "lcdsc/parallel.hpp"
#include "lcdsc/rng.hpp"

namespace lcdsc {

double doppler(double u) {
    if (!(u >= 0.0 && u <= 1.0)) throw UsageError("doppler: u must lie in [0, 1]");
    return 7.0 * std::sqrt(u * (1.0 - u)) * std::sin(2.0 * std::numbers::pi * 1.05 / (u + 0.05));
}

namespace {

void add_doppler(std::vector<double>& truth, const Interval& window) {
    const auto width = static_cast<double>(window.end - window.start);
    for (std::size_t t = window.start; t <= window.end; ++t) {
        truth[t] = doppler(static_cast<double>(t - window.start) / width);
    }
}

TimeSeries with_noise(const std::vector<double>& truth, double sigma, std::uint64_t seed) {
    TimeSeries s{truth, 1.0};
    const auto noise = gaussian_noise(truth.size(), sigma, seed);
    for (std::size_t t = 0; t < truth.size(); ++t) s.samples[t] += noise[t];
    return s;
}

}  // namespace

LocalSignal local_doppler(const LocalSignalSpec& spec) {
    if (!(spec.noise_sigma >= 0.0)) throw UsageError("local_doppler: sigma must be >= 0");
    if (spec.active.end <= spec.active.start) {
        throw UsageError("local_doppler: active window needs a_end > a_start");
    }
    if (spec.active.end >= spec.total_len) throw UsageError("local_doppler: active window exceeds T");
    LocalSignal out;
    out.active = spec.active;
    out.truth.assign(spec.total_len, 0.0);
    add_doppler(out.truth, spec.active);
    out.noisy = with_noise(out.truth, spec.noise_sigma, spec.seed);
    return out;
}

TimeSeries chirp(std::size_t total_len, double f0, double f1, double sigma, std::uint64_t seed) {
    if (total_len < 4) throw UsageError("chirp: need at least 4 samples");
    if (!(f0 >= 0.0 && f0 < 0.5 && f1 >= 0.0 && f1 < 0.5)) {
        throw UsageError("chirp: frequencies must lie in [0, 0.5) cycles per sample (Nyquist)");
    }
    if (!(sigma >= 0.0)) throw UsageError("chirp: sigma must be >= 0");
    std::vector<double> clean(total_len);
    const double rate = (f1 - f0) / static_cast<double>(total_len - 1);
    for (std::size_t t = 0; t < total_len; ++t) {
        const auto x = static_cast<double>(t);
        clean[t] = std::cos(2.0 * std::numbers::pi * (f0 * x + 0.5 * rate * x * x));
    }
    return with_noise(clean, sigma, seed);
}

DoubleSignal double_doppler(std::size_t delta, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw UsageError("double_doppler: sigma must be >= 0");
    DoubleSignal out;
    out.first = {500, 999};
    out.second = {1000 + delta, 1499 + delta};
    out.truth.assign(2000 + delta, 0.0);
    add_doppler(out.truth, out.first);
    add_doppler(out.truth, out.second);
    out.noisy = with_noise(out.truth, sigma, seed);
    return out;
}

double rss(std::span<const double> estimate, std::span<const double> truth) {
    if (estimate.size() != truth.size()) throw UsageError("rss: length mismatch");
    double s = 0.0;
    for (std::size_t t = 0; t < truth.size(); ++t) {
        const double d = truth[t] - estimate[t];
        s += d * d;
    }
    return s;
}

double locality_ratio(std::size_t active_len, std::size_t total_len) {
    if (active_len == 0 || active_len >= total_len) {
        throw UsageError("locality_ratio: need 0 < len(A) < T");
    }
    return static_cast<double>(active_len) / static_cast<double>(total_len - active_len);
}

double locality_ratio(const Interval& active, std::size_t total_len) {
    return locality_ratio(active.length(), total_len);
}

Interval window_for_ratio(double ratio, std::size_t total_len) {
    if (!(ratio > 0.0) || !std::isfinite(ratio)) throw UsageError("locality ratio must be positive");
    const auto len = static_cast<std::size_t>(
        std::llround(static_cast<double>(total_len) * ratio / (1.0 + ratio)));
    if (len < 2 || len >= total_len) throw UsageError("locality ratio leaves no room for noise");
    const std::size_t start = (total_len - len) / 2;
    return {start, start + len - 1};
}

bool separability_check(std::span<const double> cleaned_imf, const Interval& first,
                        const Interval& second) {
    if (second.start <= first.end + 1) throw UsageError("separability_check: empty gap");
    if (second.end >= cleaned_imf.size()) throw UsageError("separability_check: window exceeds IMF");
    auto any_nonzero = [&](const Interval& w) {
        for (std::size_t t = w.start; t <= w.end; ++t) {
            if (cleaned_imf[t] != 0.0) return true;
        }
        return false;
    };
    if (!any_nonzero(first) || !any_nonzero(second)) return false;
    std::size_t zeros = 0;
    const std::size_t gap = second.start - first.end - 1;
    for (std::size_t t = first.end + 1; t < second.start; ++t) zeros += cleaned_imf[t] == 0.0;
    return 2 * zeros >= gap;
}

const std::vector<std::string>& benchmark_methods() {
    static const std::vector<std::string> names{"lcdsc", "khigh", "llow", "band",
                                                "powerset", "wht", "wit", "none"};
    return names;
}

LocalSignal make_instance(const BenchCell& cell, std::uint64_t seed) {
    if (cell.scenario == Scenario::Double) {
        if (!(cell.param >= 0.0)) throw UsageError("double scenario: gap must be >= 0");
        DoubleSignal d = double_doppler(static_cast<std::size_t>(std::llround(cell.param)),
                                        cell.sigma, seed);
        return LocalSignal{std::move(d.noisy), std::move(d.truth), {d.first.start, d.second.end}};
    }
    LocalSignalSpec spec;
    spec.total_len = cell.total_len;
    spec.active = window_for_ratio(cell.param, cell.total_len);
    spec.noise_sigma = cell.sigma;
    spec.seed = seed;
    return local_doppler(spec);
}

namespace {

std::vector<double> threshold_sum(const Decomposition& d, bool interval) {
    std::vector<double> out(d.source_len, 0.0);
    for (const Imf& imf : d.imfs) {
        const auto kept = interval ? wavelet_interval_threshold(imf.samples)
                                   : wavelet_hard_threshold(imf.samples);
        for (std::size_t t = 0; t < out.size(); ++t) out[t] += kept[t];
    }
    return out;
}

}  // namespace

void check_methods(std::span<const std::string> methods) {
    if (methods.empty()) throw UsageError("no methods given");
    const auto& known = benchmark_methods();
    for (const auto& m : methods) {
        if (std::find(known.begin(), known.end(), m) == known.end()) {
            throw UsageError("unknown method '" + m + "'");
        }
    }
}

double method_rss(const std::string& method, const TimeSeries& noisy,
                  std::span<const double> truth, const Decomposition& d,
                  const LcdscConfig& config) {
    if (truth.size() != noisy.size()) throw DataError("truth and series lengths differ");
    if (method == "none") return rss(noisy.samples, truth);
    if (d.source_len != noisy.size()) throw UsageError("decomposition does not match the series");
    if (method == "lcdsc") {
        const CleaningReport report = finish(analyze(noisy, d, config), config);
        return rss(report.cleaned_signal, truth);
    }
    if (method == "khigh") return oracle_select(d, truth, RuleFamily::KHighest).rss;
    if (method == "llow") return oracle_select(d, truth, RuleFamily::LLowest).rss;
    if (method == "band") return oracle_select(d, truth, RuleFamily::Band).rss;
    if (method == "powerset") return oracle_select(d, truth, RuleFamily::PowerSet).rss;
    if (method == "wht") return rss(threshold_sum(d, false), truth);
    if (method == "wit") return rss(threshold_sum(d, true), truth);
    throw UsageError("unknown method '" + method + "'");
}

std::vector<BenchResult> run_benchmark(std::span<const std::string> methods,
                                       std::span<const BenchCell> grid, std::size_t replicates,
                                       std::uint64_t base_seed, const LcdscConfig& config) {
    if (replicates < 1) throw UsageError("replicates must be >= 1");
    check_methods(methods);
    config.validate();
    const bool needs_decomposition =
        std::any_of(methods.begin(), methods.end(), [](const std::string& m) { return m != "none"; });

    const std::size_t instances = grid.size() * replicates;
    std::vector<std::vector<BenchResult>> per_instance(instances);
    parallel_for(instances, [&](std::size_t idx) {
        const std::size_t c = idx / replicates;
        const std::size_t r = idx % replicates;
        const std::uint64_t seed = stream_seed(stream_seed(base_seed, c), r);
        const LocalSignal inst = make_instance(grid[c], mix_seed(seed));

        Decomposition d;
        double shared_seconds = 0.0;
        if (needs_decomposition) {
            LcdscConfig cfg = config;
            cfg.emd.seed = seed;
            const auto t0 = std::chrono::steady_clock::now();
            d = eemd(inst.noisy, cfg.emd);
            shared_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
        for (const auto& m : methods) {
            const auto t0 = std::chrono::steady_clock::now();
            BenchResult row;
            row.cell = c;
            row.total_len = inst.truth.size();
            row.sigma = grid[c].sigma;
            row.param = grid[c].param;
            row.method = m;
            row.replicate = r;
            row.rss = method_rss(m, inst.noisy, inst.truth, d, config);
            row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() +
                          (m == "none" ? 0.0 : shared_seconds);
            per_instance[idx].push_back(std::move(row));
        }
    });

    std::vector<BenchResult> rows;
    rows.reserve(instances * methods.size());
    for (std::size_t c = 0; c < grid.size(); ++c) {
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            for (std::size_t r = 0; r < replicates; ++r) {
                rows.push_back(per_instance[c * replicates + r][mi]);
            }
        }
    }
    return rows;
}

void write_benchmark_csv(std::ostream& out, std::span<const BenchResult> rows, bool timing) {
    out << "T,sigma,param,method,replicate,rss,seconds\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%zu,%.12g,%.12g,%s,%zu,%.12g,%.12g\n", r.total_len, r.sigma,
                      r.param, r.method.c_str(), r.replicate, r.rss, timing ? r.seconds : 0.0);
        out << buf;
    }
}

}  // namespace lcdsc
