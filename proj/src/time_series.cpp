#include "lcdsc/time_series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lcdsc/error.hpp"

namespace lcdsc {

void require_finite(std::span<const double> x, std::size_t min_len, const char* what) {
    if (x.size() < min_len) {
        throw DataError(std::string(what) + ": too short (need at least " +
                        std::to_string(min_len) + " samples, got " +
                        std::to_string(x.size()) + ")");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) {
            throw DataError(std::string(what) + ": invalid samples (non-finite value at index " +
                            std::to_string(i) + ")");
        }
    }
}

double mean(std::span<const double> x) {
    if (x.empty()) return 0.0;
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double stddev(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double range(std::span<const double> x) {
    if (x.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return *hi - *lo;
}

}  // namespace lcdsc
