#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lcdsc/emd.hpp"

namespace lcdsc {

/// Keep the k highest-numbered (lowest-frequency) IMFs.
struct KHighest {
    std::size_t k = 0;
};
/// Keep the l lowest-numbered (highest-frequency) IMFs.
struct LLowest {
    std::size_t l = 0;
};
/// Keep IMFs lo..hi (1-based, inclusive). lo > hi keeps nothing.
struct Band {
    std::size_t lo = 1;
    std::size_t hi = 0;
};
/// Keep an arbitrary set of 1-based IMF indices.
struct ExplicitSet {
    std::vector<std::size_t> indices;
};

using SubsetRule = std::variant<KHighest, LLowest, Band, ExplicitSet>;

enum class RuleFamily { KHighest, LLowest, Band, PowerSet };

struct OracleChoice {
    SubsetRule rule;
    std::vector<std::size_t> retained;  ///< 1-based, ascending
    double rss = 0.0;
};

/// 1-based indices retained by `rule` on a decomposition with `imf_count` IMFs.
std::vector<std::size_t> retained_indices(const SubsetRule& rule, std::size_t imf_count);

/// Sum of the retained IMFs; the residual is never included.
std::vector<double> keep_subset(const Decomposition& d, const SubsetRule& rule);

/// Best rule of a family against a known truth. Ties go to the smaller
/// retained set, then to the first candidate enumerated.
OracleChoice oracle_select(const Decomposition& d, std::span<const double> truth, RuleFamily family);

/// Median absolute deviation about the median, scaled by 1/0.6745.
double noise_sigma(std::span<const double> x);

/// noise_sigma(x) * sqrt(2 log n).
double universal_threshold(std::span<const double> x);

/// Zeroes every sample whose magnitude is at or below the universal threshold.
std::vector<double> wavelet_hard_threshold(std::span<const double> imf);

/// Splits the IMF at its zero crossings and keeps a whole lobe only if its
/// peak magnitude exceeds the universal threshold.
std::vector<double> wavelet_interval_threshold(std::span<const double> imf);

std::string family_name(RuleFamily family);

}  // namespace lcdsc
