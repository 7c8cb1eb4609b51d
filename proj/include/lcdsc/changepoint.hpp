#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lcdsc/time_series.hpp"

namespace lcdsc {

/// Prefix sums of x - c and (x - c)^2, where c is the mean of the whole
/// series, giving O(1) segment moments.
///
/// Segment variances are measured about c rather than each segment's own
/// mean. Amplitude series are smooth, and a per-segment mean makes every short
/// window look quiet, so the optimum degenerates into minimum-length pieces.
/// About a fixed centre a segment's "variance" is its mean power relative to
/// the series level, which is what a local burst raises.
class SegStats {
public:
    explicit SegStats(std::span<const double> x);

    std::size_t size() const { return n_; }
    double centre() const { return centre_; }
    /// Lower bound applied to segment variances before taking logs.
    double var_floor() const { return var_floor_; }
    /// Mean of (x - centre)^2 over x[i..j], inclusive.
    double variance(std::size_t i, std::size_t j) const;
    double mean(std::size_t i, std::size_t j) const;

private:
    std::size_t n_;
    double centre_;
    std::vector<double> prefix_sum_;
    std::vector<double> prefix_sumsq_;
    double var_floor_;
};

enum class PenaltyType { Aic, Bic, Mbic };

struct PenaltyKind {
    PenaltyType type = PenaltyType::Mbic;
    double beta = 2.0;  ///< per-change weight, AIC only

    static PenaltyKind aic(double beta) { return {PenaltyType::Aic, beta}; }
    static PenaltyKind bic() { return {PenaltyType::Bic, 0.0}; }
    static PenaltyKind mbic() { return {PenaltyType::Mbic, 0.0}; }

    std::string name() const;
    /// Parses "aic", "bic" or "mbic" (case-insensitive).
    static PenaltyKind parse(const std::string& name, double beta = 2.0);
    void validate() const;
};

/// Detected change points. A change at tau starts a new segment at sample tau
/// (0-based), so segments are [0, tau_1 - 1], [tau_1, tau_2 - 1], ..., [tau_m, n - 1].
struct ChangePointSet {
    std::vector<std::size_t> taus;
    double total_cost = 0.0;  ///< sum of segment costs plus penalty
    PenaltyKind penalty;
    std::size_t min_seg_len = 2;
    std::size_t n = 0;

    /// The m + 1 segments implied by taus.
    std::vector<Interval> segments() const;
};

/// n_seg * log(max(variance, var_floor)) for segment x[i..j], inclusive: the
/// Gaussian negative log-likelihood up to a factor of two and constants.
/// Throws UsageError if the segment has fewer than two samples.
double segment_cost(const SegStats& stats, std::size_t i, std::size_t j);

/// Penalty added to the summed segment cost for m changes.
///   AIC:  beta * m
///   BIC:  m * log(n)
///   MBIC: 3m log(n) + sum_i log(len_i)
/// All three are on the scale of segment_cost (twice the log-likelihood).
double penalty_value(const PenaltyKind& kind, std::size_t m, std::size_t n,
                     std::span<const std::size_t> seg_lengths);

/// Segment lengths implied by taus on a length-n series.
std::vector<std::size_t> segment_lengths(std::span<const std::size_t> taus, std::size_t n);

/// Sum of segment costs over the segmentation plus its penalty.
double segmentation_objective(const SegStats& stats, const PenaltyKind& kind,
                              std::span<const std::size_t> taus);

/// Exact penalized minimum over all segmentations whose segments are at least
/// min_seg_len long. Optimal partitioning with pruning that is delayed by
/// min_seg_len so it never discards a reachable optimum. Exact ties prefer
/// fewer change points, then the lexicographically smallest tau vector.
ChangePointSet detect_changepoints(std::span<const double> x, const PenaltyKind& kind,
                                   std::size_t min_seg_len);

}  // namespace lcdsc
