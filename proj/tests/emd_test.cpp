#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "lcdsc/emd.hpp"
#include "lcdsc/rng.hpp"
#include "lcdsc/simulation.hpp"

using namespace lcdsc;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::vector<double> sine(std::size_t n, double period, double amp = 1.0, double phase = 0.0) {
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) x[t] = amp * std::sin(two_pi * t / period + phase);
    return x;
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = mean(a), mb = mean(b);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

double max_closure_error(const TimeSeries& s, const Decomposition& d) {
    const auto r = reconstruct(d);
    double e = 0;
    for (std::size_t t = 0; t < r.size(); ++t) e = std::max(e, std::abs(r[t] - s.samples[t]));
    return e;
}

EmdConfig plain() {
    EmdConfig c;
    c.ensemble_size = 1;
    c.noise_amplitude = 0.0;
    return c;
}

}  // namespace

TEST_SUITE("emd") {

TEST_CASE("extrema of small sequences") {
    auto e = find_extrema(std::vector<double>{1, 2, 1});
    CHECK(e.maxima == std::vector<std::size_t>{1});
    CHECK(e.minima.empty());
    e = find_extrema(std::vector<double>{0, 1, 2, 3});
    CHECK(e.maxima.empty());
    CHECK(e.minima.empty());
    CHECK_THROWS_WITH_AS(find_extrema(std::vector<double>{1, 2}), doctest::Contains("too short"),
                         DataError);
}

TEST_CASE("plateau counts once at its midpoint") {
    const auto e = find_extrema(std::vector<double>{0, 1, 3, 3, 3, 1, 0});
    CHECK(e.maxima == std::vector<std::size_t>{3});
    const auto f = find_extrema(std::vector<double>{0, 1, 1, 2});
    CHECK(f.maxima.empty());
    CHECK(f.minima.empty());
}

TEST_CASE("sampled sinusoid alternates four maxima and four minima") {
    const auto x = sine(200, 50.0);
    const auto e = find_extrema(x);
    REQUIRE(e.maxima.size() == 4);
    REQUIRE(e.minima.size() == 4);
    // direct enumeration: peaks near 12.5 + 50k, troughs near 37.5 + 50k
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(std::abs(static_cast<double>(e.maxima[k]) - (12.5 + 50.0 * k)) <= 1.0);
        CHECK(std::abs(static_cast<double>(e.minima[k]) - (37.5 + 50.0 * k)) <= 1.0);
        CHECK(e.maxima[k] < e.minima[k]);
        if (k + 1 < 4) CHECK(e.minima[k] < e.maxima[k + 1]);
    }
}

TEST_CASE("zero crossings skip exact zeros") {
    CHECK(count_zero_crossings(std::vector<double>{1, 0, -1, 0, 0, 2}) == 2);
    CHECK(count_zero_crossings(std::vector<double>{1, 2, 3}) == 0);
}

TEST_CASE("natural spline reproduces lines and interpolates knots") {
    const std::vector<double> knots{-3, 2, 5, 9, 14};
    std::vector<double> line;
    for (double k : knots) line.push_back(2.0 * k - 1.0);
    const auto s = natural_spline(knots, line, 12);
    for (std::size_t t = 0; t < s.size(); ++t) CHECK(s[t] == doctest::Approx(2.0 * t - 1.0));

    const std::vector<double> vals{0, 4, -1, 2, 3};
    const auto k = natural_spline(knots, vals, 15);
    CHECK(k[2] == doctest::Approx(4.0));
    CHECK(k[5] == doctest::Approx(-1.0));
    CHECK(k[9] == doctest::Approx(2.0));
    CHECK(k[14] == doctest::Approx(3.0));
    CHECK_THROWS_AS(natural_spline(std::vector<double>{1}, std::vector<double>{1}, 4), NumericalError);
}

TEST_CASE("envelope mean of a sine is near zero and follows offsets and trends") {
    const std::size_t n = 1000;
    const auto x = sine(n, 40.0);
    const auto m = envelope_mean(x);
    for (std::size_t t = 50; t < n - 50; ++t) CHECK(std::abs(m[t]) < 0.05);

    auto shifted = x;
    for (double& v : shifted) v += 2.5;
    const auto ms = envelope_mean(shifted);
    for (std::size_t t = 50; t < n - 50; ++t) CHECK(std::abs(ms[t] - 2.5) < 0.05);

    auto trended = x;
    for (std::size_t t = 0; t < n; ++t) trended[t] += 0.002 * t;
    const auto mt = envelope_mean(trended);
    for (std::size_t t = 50; t < n - 50; ++t) CHECK(std::abs(mt[t] - 0.002 * t) < 0.1);

    CHECK_THROWS_AS(envelope_mean(std::vector<double>{0, 1, 2, 3, 4}), MonotonicComponent);
}

TEST_CASE("sifting leaves a sine intact and strips a trend") {
    const std::size_t n = 1000;
    const auto x = sine(n, 40.0);
    const auto s = sift(x, EmdConfig{});
    double num = 0, den = 0;
    for (std::size_t t = 0; t < n; ++t) {
        num += (s.samples[t] - x[t]) * (s.samples[t] - x[t]);
        den += x[t] * x[t];
    }
    CHECK(std::sqrt(num / den) < 1e-3);
    CHECK(s.converged);
    CHECK(s.iterations == EmdConfig{}.s_number);

    auto trended = x;
    for (std::size_t t = 0; t < n; ++t) trended[t] += 0.002 * t;
    const auto st = sift(trended, EmdConfig{});
    CHECK(correlation(st.samples, x) > 0.99);
}

TEST_CASE("two tones separate into the first two IMFs") {
    const std::size_t n = 1000;
    const auto fast = sine(n, 20.0);
    const auto slow = sine(n, 200.0);
    TimeSeries s{std::vector<double>(n), 1.0};
    for (std::size_t t = 0; t < n; ++t) s.samples[t] = fast[t] + slow[t];
    const auto d = emd(s, plain());
    REQUIRE(d.imfs.size() >= 2);
    CHECK(d.imfs[0].index == 1);
    CHECK(d.imfs[1].index == 2);
    CHECK(correlation(d.imfs[0].samples, fast) > 0.95);
    CHECK(correlation(d.imfs[1].samples, slow) > 0.95);
    CHECK(std::abs(orthogonality_index(d)) < 0.1);
}

TEST_CASE("a ramp has no IMFs") {
    TimeSeries s{std::vector<double>(100), 1.0};
    for (std::size_t t = 0; t < 100; ++t) s.samples[t] = 0.5 * t - 3.0;
    const auto d = emd(s, plain());
    CHECK(d.imfs.empty());
    CHECK(d.residual == s.samples);
}

TEST_CASE("invalid and short inputs are rejected") {
    TimeSeries bad{{1, 2, NAN, 4, 5}, 1.0};
    CHECK_THROWS_WITH_AS(emd(bad, plain()), doctest::Contains("invalid samples"), DataError);
    CHECK_THROWS_AS(eemd(bad, EmdConfig{}), DataError);
    TimeSeries tiny{{1, 2, 3}, 1.0};
    CHECK_THROWS_AS(emd(tiny, plain()), DataError);
    EmdConfig c;
    c.s_number = 0;
    CHECK_THROWS_AS(c.validate(), UsageError);
    c = EmdConfig{};
    c.ensemble_size = 0;
    CHECK_THROWS_AS(c.validate(), UsageError);
    c = EmdConfig{};
    c.noise_amplitude = -0.1;
    CHECK_THROWS_AS(c.validate(), UsageError);
}

TEST_CASE("automatic IMF limit is floor(log2 n) - 1") {
    EmdConfig c;
    CHECK(c.imf_limit(1000) == 8);
    CHECK(c.imf_limit(1024) == 9);
    c.max_imfs = 3;
    CHECK(c.imf_limit(1000) == 3);
}

TEST_CASE("property: additive identity holds for random inputs") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const std::size_t n = 50 + 37 * seed;
        TimeSeries s{gaussian_noise(n, 1.0 + seed, seed), 1.0};
        for (std::size_t t = 0; t < n; ++t) s.samples[t] += 0.01 * seed * t;
        const double r = range(s.samples);
        const auto d = emd(s, plain());
        CHECK(max_closure_error(s, d) < 1e-9 * r);
        for (const auto& imf : d.imfs) CHECK(imf.samples.size() == n);
        CHECK(d.residual.size() == n);
        CHECK(d.source_len == n);
    }
}

TEST_CASE("property: converged IMFs balance extrema and zero crossings") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto x = gaussian_noise(400, 1.0, seed);
        EmdConfig c;
        const auto s = sift(x, c);
        if (!s.converged) continue;
        const auto e = find_extrema(s.samples);
        const long ext = static_cast<long>(e.maxima.size() + e.minima.size());
        const long zc = static_cast<long>(count_zero_crossings(s.samples));
        CHECK(std::labs(ext - zc) <= 1);
    }
}

TEST_CASE("property: residual of an exhausted EMD has fewer than two extrema") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        TimeSeries s{gaussian_noise(300, 1.0, seed), 1.0};
        EmdConfig c = plain();
        c.max_imfs = 100;
        const auto d = emd(s, c);
        // extraction also stops once the remainder is at rounding level
        const auto e = find_extrema(d.residual);
        const bool negligible = range(d.residual) <= 1e-12 * range(s.samples);
        CHECK((e.maxima.size() + e.minima.size() < 2 || negligible));
        CHECK(d.imfs.size() < 20);
    }
}

TEST_CASE("degenerate ensemble equals plain EMD bit for bit") {
    TimeSeries s{gaussian_noise(500, 1.0, 3), 1.0};
    const auto a = emd(s, plain());
    const auto b = eemd(s, plain());
    REQUIRE(a.imfs.size() == b.imfs.size());
    for (std::size_t j = 0; j < a.imfs.size(); ++j) CHECK(a.imfs[j].samples == b.imfs[j].samples);
    CHECK(a.residual == b.residual);
}

TEST_CASE("EEMD closes exactly and is independent of the thread count") {
    LocalSignalSpec spec;
    spec.seed = 5;
    const auto sig = local_doppler(spec);
    EmdConfig c;
    c.ensemble_size = 12;
    c.seed = 99;
    setenv("LCDSC_THREADS", "1", 1);
    const auto a = eemd(sig.noisy, c);
    setenv("LCDSC_THREADS", "4", 1);
    const auto b = eemd(sig.noisy, c);
    unsetenv("LCDSC_THREADS");
    REQUIRE(a.imfs.size() == b.imfs.size());
    for (std::size_t j = 0; j < a.imfs.size(); ++j) CHECK(a.imfs[j].samples == b.imfs[j].samples);
    CHECK(a.residual == b.residual);
    CHECK(a.imfs.size() >= 6);
    CHECK(max_closure_error(sig.noisy, a) < 1e-9 * range(sig.noisy.samples));

    // Doppler energy spreads over several IMFs
    std::size_t carrying = 0;
    for (const auto& imf : a.imfs) {
        double inside = 0;
        for (std::size_t t = 1000; t <= 1500; ++t) inside += imf.samples[t] * imf.samples[t];
        if (inside > 0.05 * 501 * 2.0) ++carrying;
    }
    CHECK(carrying >= 2);

    c.seed = 100;
    const auto other = eemd(sig.noisy, c);
    CHECK(other.imfs[0].samples != a.imfs[0].samples);
}

TEST_CASE("orthogonality index of constructed decompositions") {
    Decomposition d;
    d.source_len = 8;
    d.imfs = {{{1, 0, 1, 0, 1, 0, 1, 0}, 1}, {{0, 1, 0, 1, 0, 1, 0, 1}, 2}};
    d.residual.assign(8, 0.0);
    CHECK(orthogonality_index(d) == 0.0);

    const auto x = sine(64, 16.0);
    Decomposition dup;
    dup.source_len = 64;
    dup.imfs = {{x, 1}, {x, 2}};
    dup.residual.assign(64, 0.0);
    CHECK(orthogonality_index(dup) == doctest::Approx(0.5));

    Decomposition zero;
    zero.source_len = 4;
    zero.imfs = {{{0, 0, 0, 0}, 1}, {{0, 0, 0, 0}, 2}};
    zero.residual.assign(4, 0.0);
    CHECK_THROWS_WITH_AS(orthogonality_index(zero), doctest::Contains("degenerate"), NumericalError);
    CHECK(reconstruct(zero) == std::vector<double>(4, 0.0));
    zero.residual = {1, 2, 3, 4};
    CHECK(reconstruct(zero) == zero.residual);
}

}
