#include "lcdsc/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lcdsc/error.hpp"

namespace lcdsc {

double sample_variance(std::span<const double> x, std::size_t i, std::size_t j) {
    if (j < i || j >= x.size()) throw UsageError("sample_variance: empty segment");
    const auto len = static_cast<double>(j - i + 1);
    double m = 0.0;
    for (std::size_t t = i; t <= j; ++t) m += x[t];
    m /= len;
    double ss = 0.0;
    for (std::size_t t = i; t <= j; ++t) ss += (x[t] - m) * (x[t] - m);
    return ss / len;
}

namespace {

// Continued fraction for I_x(a, b) (modified Lentz), valid for x < (a+1)/(a+b+2).
double beta_continued_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 20000; ++m) {
        const double m2 = 2.0 * m;
        double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
        d = 1.0 + num * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + num / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;

        num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
        d = 1.0 + num * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + num / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < eps) return h;
    }
    throw NumericalError("incomplete beta: continued fraction did not converge");
}

// I_x(a, b) given both x and y = 1 - x, so callers near x = 1 keep precision.
double ibeta(double a, double b, double x, double y) {
    if (x <= 0.0) return 0.0;
    if (y <= 0.0) return 1.0;
    const double log_front = a * std::log(x) + b * std::log(y) + std::lgamma(a + b) -
                             std::lgamma(a) - std::lgamma(b);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw UsageError("incomplete beta: a and b must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw UsageError("incomplete beta: x outside [0, 1]");
    return ibeta(a, b, x, 1.0 - x);
}

double f_cdf(double x, double df1, double df2) {
    if (!(df1 > 0.0) || !(df2 > 0.0) || !std::isfinite(df1) || !std::isfinite(df2)) {
        throw UsageError("f_cdf: degrees of freedom must be positive");
    }
    if (std::isnan(x) || x < 0.0) throw UsageError("f_cdf: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    const double scaled = df1 * x;
    const double denom = scaled + df2;
    return std::clamp(ibeta(0.5 * df1, 0.5 * df2, scaled / denom, df2 / denom), 0.0, 1.0);
}

SegmentTest f_test_segment(const std::optional<SegmentMoments>& before,
                           const SegmentMoments& during,
                           const std::optional<SegmentMoments>& after, double gamma,
                           double var_floor) {
    if (!(gamma >= 1.0) || !std::isfinite(gamma)) throw UsageError("gamma must be >= 1");
    if (during.n < 2) throw UsageError("f_test_segment: during segment needs >= 2 samples");
    if (!before && !after) throw UsageError("f_test_segment: need at least one neighbour");

    SegmentTest test;
    test.gamma = gamma;
    test.s2_during = during.s2;
    test.n_during = during.n;
    double reference = 0.0;
    std::size_t df2 = 0;
    if (before) {
        test.s2_before = before->s2;
        test.n_before = before->n;
        reference = std::max(reference, before->s2);
        df2 = std::max(df2, before->n);
    }
    if (after) {
        test.s2_after = after->s2;
        test.n_after = after->n;
        reference = std::max(reference, after->s2);
        df2 = std::max(df2, after->n);
    }
    if (df2 == 0) throw UsageError("f_test_segment: empty neighbour");

    if (during.s2 <= var_floor) {
        test.f_stat = reference > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        test.p_value = 1.0;
        return test;
    }
    test.f_stat = gamma * reference / during.s2;
    test.p_value = f_cdf(test.f_stat, static_cast<double>(during.n), static_cast<double>(df2));
    return test;
}

HolmResult holm_bonferroni(std::span<const double> p_values, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha must lie in (0, 1)");
    const std::size_t k = p_values.size();
    HolmResult out{std::vector<bool>(k, false), std::vector<double>(k, 0.0)};

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

    bool rejecting = true;
    for (std::size_t rank = 0; rank < k; ++rank) {
        const std::size_t i = order[rank];
        const double threshold = alpha / static_cast<double>(k - rank);
        out.thresholds[i] = threshold;
        if (rejecting && p_values[i] < threshold) {
            out.significant[i] = true;
        } else {
            rejecting = false;
        }
    }
    return out;
}

}  // namespace lcdsc
