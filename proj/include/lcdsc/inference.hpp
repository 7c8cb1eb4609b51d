#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace lcdsc {

/// Variance and length of one segment.
struct SegmentMoments {
    double s2 = 0.0;
    std::size_t n = 0;
};

/// F test of one inter-change-point segment against its neighbours.
struct SegmentTest {
    std::size_t imf_index = 0;
    std::size_t seg_start = 0;
    std::size_t seg_end = 0;
    std::optional<double> s2_before;
    double s2_during = 0.0;
    std::optional<double> s2_after;
    std::size_t n_before = 0;
    std::size_t n_during = 0;
    std::size_t n_after = 0;
    double gamma = 1.0;
    double f_stat = 0.0;
    double p_value = 1.0;
};

struct SegmentDecision {
    SegmentTest test;
    bool tested = false;  ///< false for segments outside the test family
    bool significant = false;
    double holm_threshold = 0.0;
};

struct HolmResult {
    std::vector<bool> significant;  ///< in input order
    std::vector<double> thresholds;  ///< alpha / (K - rank + 1) at each hypothesis's rank
};

/// Biased (divide-by-n) variance of x[i..j], inclusive.
double sample_variance(std::span<const double> x, std::size_t i, std::size_t j);

/// Regularized incomplete beta I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);

/// P(F <= x) for F ~ F(df1, df2).
double f_cdf(double x, double df1, double df2);

/// gamma * max(neighbour variances) / s2_during, referred to the lower tail of
/// F(n_during, max neighbour length). A small statistic means the segment's
/// variance exceeds gamma times both neighbours. Segments whose variance is at
/// or below `var_floor` get p = 1.
SegmentTest f_test_segment(const std::optional<SegmentMoments>& before,
                           const SegmentMoments& during,
                           const std::optional<SegmentMoments>& after, double gamma,
                           double var_floor = 0.0);

/// Holm step-down procedure at family-wise level alpha. Equal p-values keep
/// their input order.
HolmResult holm_bonferroni(std::span<const double> p_values, double alpha);

}  // namespace lcdsc
