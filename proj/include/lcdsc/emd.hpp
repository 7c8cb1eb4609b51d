#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lcdsc/error.hpp"
#include "lcdsc/time_series.hpp"

namespace lcdsc {

/// Raised by envelope_mean when the input has too few extrema to build
/// envelopes. EMD treats it as the end of IMF extraction.
class MonotonicComponent : public DataError {
public:
    MonotonicComponent() : DataError("monotonic component") {}
};

struct Extrema {
    std::vector<std::size_t> maxima;
    std::vector<std::size_t> minima;
};

/// One intrinsic mode function. `index` is 1-based, highest frequency first.
struct Imf {
    std::vector<double> samples;
    std::size_t index = 0;
};

struct EmdConfig {
    int s_number = 4;          ///< consecutive sifts satisfying the extrema/zero-crossing rule
    int max_sift_iters = 50;
    std::size_t max_imfs = 0;  ///< 0 = auto, floor(log2 n) - 1
    std::size_t ensemble_size = 100;
    double noise_amplitude = 0.2;  ///< added noise sd as a fraction of the source sd
    std::uint64_t seed = 0;

    /// Throws UsageError on out-of-range fields.
    void validate() const;
    std::size_t imf_limit(std::size_t n) const;
};

struct Decomposition {
    std::vector<Imf> imfs;
    std::vector<double> residual;
    std::size_t source_len = 0;

    /// Sifts that stopped at max_sift_iters instead of S-stoppage (summed over trials).
    std::size_t truncated_sifts = 0;
    /// EEMD trials that produced fewer IMFs than the ensemble maximum.
    std::size_t short_trials = 0;

    std::size_t imf_count() const { return imfs.size(); }
};

struct SiftResult {
    std::vector<double> samples;
    int iterations = 0;
    bool converged = false;  ///< false when max_sift_iters was reached
};

/// Interior extrema by three-point comparison. A flat run bounded by lower
/// (higher) neighbours on both sides counts once, at its midpoint.
Extrema find_extrema(std::span<const double> x);

/// Sign changes of x, skipping exact zeros.
std::size_t count_zero_crossings(std::span<const double> x);

/// Natural cubic spline through (knots, values), evaluated at t = 0..n-1.
/// Knots must be strictly increasing and at least two.
std::vector<double> natural_spline(std::span<const double> knots, std::span<const double> values,
                                   std::size_t n);

/// Mean of the upper and lower cubic-spline envelopes. The two extrema nearest
/// each end are mirrored across the end sample before fitting.
/// Throws MonotonicComponent if x has fewer than two extrema in total.
std::vector<double> envelope_mean(std::span<const double> x);

SiftResult sift(std::span<const double> x, const EmdConfig& config);

Decomposition emd(const TimeSeries& series, const EmdConfig& config);

/// Noise-assisted ensemble EMD. Trial k perturbs the input with white noise
/// drawn from stream (config.seed, k); IMF j is averaged over all trials, with
/// trials that stopped early contributing zeros. The residual closes the sum:
/// residual = series - sum of averaged IMFs.
Decomposition eemd(const TimeSeries& series, const EmdConfig& config);

/// Sum of all IMFs plus the residual.
std::vector<double> reconstruct(const Decomposition& d);

/// Cross-energy of the IMFs relative to the energy of the reconstruction.
double orthogonality_index(const Decomposition& d);

}  // namespace lcdsc
