#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lcdsc {

/// Uniformly sampled real-valued recording.
struct TimeSeries {
    std::vector<double> samples;
    double dt = 1.0;

    std::size_t size() const { return samples.size(); }
};

/// Closed index interval [start, end].
struct Interval {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t length() const { return end - start + 1; }
    bool contains(std::size_t t) const { return t >= start && t <= end; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Throws DataError unless every sample is finite and there are at least `min_len`.
void require_finite(std::span<const double> x, std::size_t min_len, const char* what);

double mean(std::span<const double> x);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than two samples.
double stddev(std::span<const double> x);
/// max(x) - min(x); 0 for empty input.
double range(std::span<const double> x);

}  // namespace lcdsc
