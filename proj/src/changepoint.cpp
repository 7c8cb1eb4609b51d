#include "lcdsc/changepoint.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "lcdsc/error.hpp"

namespace lcdsc {

SegStats::SegStats(std::span<const double> x)
    : n_(x.size()),
      centre_(lcdsc::mean(x)),
      prefix_sum_(x.size() + 1, 0.0),
      prefix_sumsq_(x.size() + 1, 0.0) {
    double global_ss = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        const double v = x[i] - centre_;
        prefix_sum_[i + 1] = prefix_sum_[i] + v;
        prefix_sumsq_[i + 1] = prefix_sumsq_[i] + v * v;
        global_ss += v * v;
    }
    const double global_var = n_ > 0 ? global_ss / static_cast<double>(n_) : 0.0;
    var_floor_ = 1e-12 * (global_var + 1e-300);
}

double SegStats::mean(std::size_t i, std::size_t j) const {
    const auto len = static_cast<double>(j - i + 1);
    return centre_ + (prefix_sum_[j + 1] - prefix_sum_[i]) / len;
}

double SegStats::variance(std::size_t i, std::size_t j) const {
    const auto len = static_cast<double>(j - i + 1);
    return (prefix_sumsq_[j + 1] - prefix_sumsq_[i]) / len;
}

std::string PenaltyKind::name() const {
    switch (type) {
        case PenaltyType::Aic: return "aic";
        case PenaltyType::Bic: return "bic";
        case PenaltyType::Mbic: return "mbic";
    }
    return "unknown";
}

PenaltyKind PenaltyKind::parse(const std::string& name, double beta) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    PenaltyKind kind;
    if (lower == "aic") kind = aic(beta);
    else if (lower == "bic") kind = bic();
    else if (lower == "mbic") kind = mbic();
    else throw UsageError("unknown penalty '" + name + "' (expected aic, bic or mbic)");
    kind.validate();
    return kind;
}

void PenaltyKind::validate() const {
    if (type == PenaltyType::Aic && !(beta > 0.0 && std::isfinite(beta))) {
        throw UsageError("AIC penalty requires beta > 0");
    }
}

std::vector<Interval> ChangePointSet::segments() const {
    std::vector<Interval> out;
    std::size_t start = 0;
    for (std::size_t tau : taus) {
        out.push_back({start, tau - 1});
        start = tau;
    }
    if (n > 0) out.push_back({start, n - 1});
    return out;
}

double segment_cost(const SegStats& stats, std::size_t i, std::size_t j) {
    if (j < i || j >= stats.size() || j - i + 1 < 2) throw UsageError("segment too short");
    const double var = std::max(stats.variance(i, j), stats.var_floor());
    return static_cast<double>(j - i + 1) * std::log(var);
}

double penalty_value(const PenaltyKind& kind, std::size_t m, std::size_t n,
                     std::span<const std::size_t> seg_lengths) {
    if (seg_lengths.size() != m + 1) {
        throw UsageError("penalty_value: expected m + 1 segment lengths");
    }
    std::size_t total = 0;
    for (std::size_t len : seg_lengths) {
        if (len == 0) throw UsageError("penalty_value: empty segment");
        total += len;
    }
    if (total != n) throw UsageError("penalty_value: segment lengths do not sum to n");

    const auto changes = static_cast<double>(m);
    switch (kind.type) {
        case PenaltyType::Aic: return kind.beta * changes;
        case PenaltyType::Bic: return changes * std::log(static_cast<double>(n));
        case PenaltyType::Mbic: {
            double log_lengths = 0.0;
            for (std::size_t len : seg_lengths) log_lengths += std::log(static_cast<double>(len));
            return 3.0 * changes * std::log(static_cast<double>(n)) + log_lengths;
        }
    }
    return 0.0;
}

std::vector<std::size_t> segment_lengths(std::span<const std::size_t> taus, std::size_t n) {
    std::vector<std::size_t> lengths;
    std::size_t start = 0;
    for (std::size_t tau : taus) {
        if (tau <= start || tau >= n) throw UsageError("change points must be increasing and interior");
        lengths.push_back(tau - start);
        start = tau;
    }
    lengths.push_back(n - start);
    return lengths;
}

double segmentation_objective(const SegStats& stats, const PenaltyKind& kind,
                              std::span<const std::size_t> taus) {
    const std::size_t n = stats.size();
    const auto lengths = segment_lengths(taus, n);
    double cost = 0.0;
    std::size_t start = 0;
    for (std::size_t len : lengths) {
        cost += segment_cost(stats, start, start + len - 1);
        start += len;
    }
    return cost + penalty_value(kind, taus.size(), n, lengths);
}

namespace {

std::vector<std::size_t> backtrack(const std::vector<std::size_t>& prev, std::size_t t) {
    std::vector<std::size_t> taus;
    while (t > 0) {
        taus.push_back(t);
        t = prev[t];
    }
    if (!taus.empty()) taus.erase(taus.begin());  // the series end is not a change
    std::reverse(taus.begin(), taus.end());
    return taus;
}

// Taus of the path ending at t whose last segment starts at s.
std::vector<std::size_t> path_via(const std::vector<std::size_t>& prev, std::size_t s) {
    std::vector<std::size_t> taus;
    for (std::size_t t = s; t > 0; t = prev[t]) taus.push_back(t);
    std::reverse(taus.begin(), taus.end());
    return taus;
}

}  // namespace

ChangePointSet detect_changepoints(std::span<const double> x, const PenaltyKind& kind,
                                   std::size_t min_seg_len) {
    kind.validate();
    if (min_seg_len < 2) throw UsageError("min_seg_len must be at least 2");
    const std::size_t n = x.size();
    if (n < 2 * min_seg_len) {
        throw DataError("detect_changepoints: series too short (" + std::to_string(n) +
                        " samples, need " + std::to_string(2 * min_seg_len) + ")");
    }
    require_finite(x, 2 * min_seg_len, "detect_changepoints");

    const SegStats stats(x);
    const double log_n = std::log(static_cast<double>(n));

    // MBIC is split into a per-change constant and a per-segment log-length term
    // folded into the segment cost; the sum is identical to penalty_value.
    double change_penalty = 0.0;
    bool length_term = false;
    double split_slack = 0.0;  // how much a split can raise the folded cost
    switch (kind.type) {
        case PenaltyType::Aic: change_penalty = kind.beta; break;
        case PenaltyType::Bic: change_penalty = log_n; break;
        case PenaltyType::Mbic:
            change_penalty = 3.0 * log_n;
            length_term = true;
            split_slack = log_n;
            break;
    }
    auto cost = [&](std::size_t s, std::size_t t) {
        double c = segment_cost(stats, s, t - 1);
        if (length_term) c += std::log(static_cast<double>(t - s));
        return c;
    };

    constexpr double inf = std::numeric_limits<double>::infinity();
    constexpr std::size_t never = std::numeric_limits<std::size_t>::max();
    std::vector<double> best(n + 1, inf);
    std::vector<std::size_t> prev(n + 1, 0);
    std::vector<std::size_t> changes(n + 1, 0);
    best[0] = 0.0;

    struct Candidate {
        std::size_t start;
        std::size_t prune_at;
        double value;
    };
    std::vector<Candidate> candidates{{0, never, 0.0}};

    for (std::size_t t = min_seg_len; t <= n; ++t) {
        std::erase_if(candidates, [t](const Candidate& c) { return c.prune_at <= t; });

        double f = inf;
        std::size_t arg = 0;
        for (Candidate& c : candidates) {
            if (t - c.start < min_seg_len) continue;
            c.value = best[c.start] + cost(c.start, t) + (c.start > 0 ? change_penalty : 0.0);
            if (c.value < f) {
                f = c.value;
                arg = c.start;
            } else if (c.value == f) {
                const std::size_t mc = changes[c.start] + (c.start > 0);
                const std::size_t ma = changes[arg] + (arg > 0);
                if (mc < ma || (mc == ma && path_via(prev, c.start) < path_via(prev, arg))) {
                    arg = c.start;
                }
            }
        }
        if (f == inf) continue;
        best[t] = f;
        prev[t] = arg;
        changes[t] = changes[arg] + (arg > 0);

        // A start dominated at t stays dominated for every end >= t + min_seg_len;
        // ends closer than that cannot split at t, so removal waits until then.
        const double margin = change_penalty + split_slack + 1e-9 * (1.0 + std::abs(f));
        for (Candidate& c : candidates) {
            if (c.prune_at == never && t - c.start >= min_seg_len && c.value > f + margin) {
                c.prune_at = t + min_seg_len;
            }
        }
        candidates.push_back({t, never, 0.0});
    }

    ChangePointSet out;
    out.n = n;
    out.penalty = kind;
    out.min_seg_len = min_seg_len;
    out.taus = backtrack(prev, n);
    out.total_cost = segmentation_objective(stats, kind, out.taus);
    return out;
}

}  // namespace lcdsc
