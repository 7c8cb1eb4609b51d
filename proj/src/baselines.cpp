#include "lcdsc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lcdsc/error.hpp"

namespace lcdsc {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double median_of(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
    }
    return m;
}

// RSS of a subset from inner products: |truth|^2 - 2 sum <truth, imf_j>
// + sum_{j,k} <imf_j, imf_k>.
class SubsetScorer {
public:
    SubsetScorer(const Decomposition& d, std::span<const double> truth)
        : count_(d.imfs.size()), gram_(count_ * count_, 0.0), cross_(count_, 0.0) {
        for (double v : truth) truth_energy_ += v * v;
        for (std::size_t j = 0; j < count_; ++j) {
            const auto& a = d.imfs[j].samples;
            for (std::size_t t = 0; t < truth.size(); ++t) cross_[j] += a[t] * truth[t];
            for (std::size_t k = j; k < count_; ++k) {
                const auto& b = d.imfs[k].samples;
                double s = 0.0;
                for (std::size_t t = 0; t < a.size(); ++t) s += a[t] * b[t];
                gram_[j * count_ + k] = s;
                gram_[k * count_ + j] = s;
            }
        }
    }

    double rss(const std::vector<std::size_t>& retained) const {
        double value = truth_energy_;
        for (std::size_t a : retained) {
            value -= 2.0 * cross_[a - 1];
            for (std::size_t b : retained) value += gram_[(a - 1) * count_ + (b - 1)];
        }
        return std::max(value, 0.0);
    }

private:
    std::size_t count_;
    std::vector<double> gram_;
    std::vector<double> cross_;
    double truth_energy_ = 0.0;
};

}  // namespace

std::vector<std::size_t> retained_indices(const SubsetRule& rule, std::size_t imf_count) {
    std::vector<std::size_t> out;
    std::visit(Overloaded{
                   [&](const KHighest& r) {
                       if (r.k > imf_count) throw UsageError("KHighest: k exceeds IMF count");
                       for (std::size_t j = imf_count - r.k + 1; j <= imf_count; ++j) out.push_back(j);
                   },
                   [&](const LLowest& r) {
                       if (r.l > imf_count) throw UsageError("LLowest: l exceeds IMF count");
                       for (std::size_t j = 1; j <= r.l; ++j) out.push_back(j);
                   },
                   [&](const Band& r) {
                       if (r.lo > r.hi) return;
                       if (r.lo < 1 || r.hi > imf_count) throw UsageError("Band: window out of range");
                       for (std::size_t j = r.lo; j <= r.hi; ++j) out.push_back(j);
                   },
                   [&](const ExplicitSet& r) {
                       out = r.indices;
                       std::sort(out.begin(), out.end());
                       out.erase(std::unique(out.begin(), out.end()), out.end());
                       for (std::size_t j : out) {
                           if (j < 1 || j > imf_count) throw UsageError("ExplicitSet: index out of range");
                       }
                   },
               },
               rule);
    return out;
}

std::vector<double> keep_subset(const Decomposition& d, const SubsetRule& rule) {
    std::vector<double> out(d.source_len, 0.0);
    for (std::size_t j : retained_indices(rule, d.imfs.size())) {
        const auto& imf = d.imfs[j - 1].samples;
        for (std::size_t t = 0; t < out.size(); ++t) out[t] += imf[t];
    }
    return out;
}

OracleChoice oracle_select(const Decomposition& d, std::span<const double> truth,
                           RuleFamily family) {
    if (truth.size() != d.source_len) throw UsageError("oracle_select: truth length mismatch");
    const std::size_t n = d.imfs.size();
    if (family == RuleFamily::PowerSet && n > 20) {
        throw UsageError("oracle_select: subset explosion (" + std::to_string(n) + " IMFs)");
    }

    std::vector<SubsetRule> candidates;
    switch (family) {
        case RuleFamily::KHighest:
            for (std::size_t k = 0; k <= n; ++k) candidates.emplace_back(KHighest{k});
            break;
        case RuleFamily::LLowest:
            for (std::size_t l = 0; l <= n; ++l) candidates.emplace_back(LLowest{l});
            break;
        case RuleFamily::Band:
            candidates.emplace_back(Band{1, 0});
            for (std::size_t lo = 1; lo <= n; ++lo) {
                for (std::size_t hi = lo; hi <= n; ++hi) candidates.emplace_back(Band{lo, hi});
            }
            break;
        case RuleFamily::PowerSet:
            for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
                ExplicitSet s;
                for (std::size_t j = 0; j < n; ++j) {
                    if (mask & (std::size_t{1} << j)) s.indices.push_back(j + 1);
                }
                candidates.emplace_back(std::move(s));
            }
            break;
    }

    const SubsetScorer scorer(d, truth);
    OracleChoice best{candidates.front(), {}, std::numeric_limits<double>::infinity()};
    for (const auto& rule : candidates) {
        auto retained = retained_indices(rule, n);
        const double r = scorer.rss(retained);
        if (r < best.rss || (r == best.rss && retained.size() < best.retained.size())) {
            best = OracleChoice{rule, std::move(retained), r};
        }
    }
    return best;
}

double noise_sigma(std::span<const double> x) {
    if (x.empty()) throw UsageError("noise_sigma: empty input");
    std::vector<double> v(x.begin(), x.end());
    const double med = median_of(v);
    for (double& e : v) e = std::abs(e - med);
    return median_of(std::move(v)) / 0.6745;
}

double universal_threshold(std::span<const double> x) {
    return noise_sigma(x) * std::sqrt(2.0 * std::log(static_cast<double>(x.size())));
}

std::vector<double> wavelet_hard_threshold(std::span<const double> imf) {
    const double threshold = universal_threshold(imf);
    std::vector<double> out(imf.begin(), imf.end());
    for (double& v : out) {
        if (std::abs(v) <= threshold) v = 0.0;
    }
    return out;
}

std::vector<double> wavelet_interval_threshold(std::span<const double> imf) {
    const double threshold = universal_threshold(imf);
    std::vector<double> out(imf.size(), 0.0);
    // Lobes are maximal runs of one sign; exact zeros join the current run.
    std::size_t start = 0;
    while (start < imf.size()) {
        int sign = 0;
        std::size_t end = start;
        double peak = 0.0;
        for (; end < imf.size(); ++end) {
            const int s = (imf[end] > 0.0) - (imf[end] < 0.0);
            if (s != 0 && sign != 0 && s != sign) break;
            if (s != 0) sign = s;
            peak = std::max(peak, std::abs(imf[end]));
        }
        if (peak > threshold) {
            std::copy(imf.begin() + static_cast<std::ptrdiff_t>(start),
                      imf.begin() + static_cast<std::ptrdiff_t>(end),
                      out.begin() + static_cast<std::ptrdiff_t>(start));
        }
        start = end;
    }
    return out;
}

std::string family_name(RuleFamily family) {
    switch (family) {
        case RuleFamily::KHighest: return "khigh";
        case RuleFamily::LLowest: return "llow";
        case RuleFamily::Band: return "band";
        case RuleFamily::PowerSet: return "powerset";
    }
    return "unknown";
}

}  // namespace lcdsc
