#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lcdsc/cleaning.hpp"
#include "lcdsc/time_series.hpp"

namespace lcdsc {

/// Additive local noise model: truth restricted to `active` plus white noise.
struct LocalSignalSpec {
    std::size_t total_len = 2500;
    Interval active{1000, 1500};
    double noise_sigma = 0.2;
    std::uint64_t seed = 0;
};

struct LocalSignal {
    TimeSeries noisy;
    std::vector<double> truth;
    Interval active;
};

struct DoubleSignal {
    TimeSeries noisy;
    std::vector<double> truth;
    Interval first;
    Interval second;
};

/// 7 sqrt(u(1-u)) sin(2 pi 1.05 / (u + 0.05)) for u in [0, 1].
double doppler(double u);

/// Doppler stretched over the active window: u = (t - start) / (end - start).
LocalSignal local_doppler(const LocalSignalSpec& spec);

/// Unit-amplitude linear chirp from f0 to f1 (cycles per sample) plus noise.
TimeSeries chirp(std::size_t total_len, double f0, double f1, double sigma, std::uint64_t seed);

/// 500 samples of noise, a 500-sample Doppler, a gap of `delta` noise samples,
/// a second 500-sample Doppler and 500 trailing noise samples.
DoubleSignal double_doppler(std::size_t delta, double sigma, std::uint64_t seed);

/// Sum of squared differences.
double rss(std::span<const double> estimate, std::span<const double> truth);

/// active_len / (total_len - active_len).
double locality_ratio(std::size_t active_len, std::size_t total_len);
double locality_ratio(const Interval& active, std::size_t total_len);

/// Centred active window whose locality ratio is as close as possible to `ratio`.
Interval window_for_ratio(double ratio, std::size_t total_len);

/// True when the cleaned IMF is nonzero somewhere in each active window and at
/// least half of the samples strictly between them are exactly zero.
bool separability_check(std::span<const double> cleaned_imf, const Interval& first,
                        const Interval& second);

enum class Scenario { Local, Double };

/// One benchmark grid cell. For Local, `param` is the locality ratio; for
/// Double it is the gap length and `total_len` is ignored.
struct BenchCell {
    Scenario scenario = Scenario::Local;
    std::size_t total_len = 2500;
    double sigma = 0.2;
    double param = 0.25;
};

struct BenchResult {
    std::size_t cell = 0;
    std::size_t total_len = 0;
    double sigma = 0.0;
    double param = 0.0;
    std::string method;
    std::size_t replicate = 0;
    double rss = 0.0;
    double seconds = 0.0;
};

/// Method names accepted by run_benchmark.
const std::vector<std::string>& benchmark_methods();

/// Throws UsageError if `methods` is empty or names an unknown method.
void check_methods(std::span<const std::string> methods);

/// RSS against `truth` of one named method applied to `noisy`, whose
/// decomposition is `d` (unused by "none").
double method_rss(const std::string& method, const TimeSeries& noisy,
                  std::span<const double> truth, const Decomposition& d,
                  const LcdscConfig& config);

/// Runs every method on the same seeded instance for each cell and replicate.
/// All decomposition-based methods share one EEMD per instance. Rows are
/// ordered by cell, then method (in the given order), then replicate.
std::vector<BenchResult> run_benchmark(std::span<const std::string> methods,
                                       std::span<const BenchCell> grid, std::size_t replicates,
                                       std::uint64_t base_seed, const LcdscConfig& config);

/// CSV with header `T,sigma,param,method,replicate,rss,seconds`; floats use
/// 12 significant digits. Without `timing` the seconds column is written as 0
/// so repeated runs are byte-identical.
void write_benchmark_csv(std::ostream& out, std::span<const BenchResult> rows, bool timing);

/// Seeded instance for a grid cell (shared by the runner and its tests).
LocalSignal make_instance(const BenchCell& cell, std::uint64_t seed);

}  // namespace lcdsc
