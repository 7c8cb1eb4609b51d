#include "doctest.h"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "lcdsc/error.hpp"
#include "lcdsc/parallel.hpp"
#include "lcdsc/rng.hpp"
#include "lcdsc/time_series.hpp"

using namespace lcdsc;

TEST_SUITE("core") {

TEST_CASE("interval is inclusive") {
    const Interval a{3, 7};
    CHECK(a.length() == 5);
    CHECK(a.contains(3));
    CHECK(a.contains(7));
    CHECK_FALSE(a.contains(8));
    CHECK(a == Interval{3, 7});
}

TEST_CASE("require_finite rejects short and non-finite input") {
    const std::vector<double> ok{1, 2, 3, 4};
    CHECK_NOTHROW(require_finite(ok, 4, "x"));
    CHECK_THROWS_WITH_AS(require_finite(ok, 5, "x"), doctest::Contains("too short"), DataError);
    const std::vector<double> bad{1, NAN, 3, 4};
    CHECK_THROWS_WITH_AS(require_finite(bad, 1, "x"), doctest::Contains("invalid samples"), DataError);
    const std::vector<double> inf{1, 2, INFINITY};
    CHECK_THROWS_AS(require_finite(inf, 1, "x"), DataError);
}

TEST_CASE("summary statistics") {
    const std::vector<double> x{2, 4, 4, 4, 5, 5, 7, 9};
    CHECK(mean(x) == doctest::Approx(5.0));
    CHECK(stddev(x) == doctest::Approx(std::sqrt(32.0 / 7.0)));
    CHECK(range(x) == 7.0);
    CHECK(stddev(std::vector<double>{1.0}) == 0.0);
    CHECK(range(std::vector<double>{}) == 0.0);
}

TEST_CASE("stream seeds are distinct and stable") {
    CHECK(stream_seed(1, 0) == stream_seed(1, 0));
    CHECK(stream_seed(1, 0) != stream_seed(1, 1));
    CHECK(stream_seed(1, 0) != stream_seed(2, 0));
    CHECK(mix_seed(0) != 0);
}

TEST_CASE("gaussian noise is reproducible with the requested spread") {
    const auto a = gaussian_noise(20000, 3.0, 11);
    const auto b = gaussian_noise(20000, 3.0, 11);
    CHECK(a == b);
    CHECK(std::abs(mean(a)) < 0.1);
    CHECK(stddev(a) == doctest::Approx(3.0).epsilon(0.03));
    const auto z = gaussian_noise(10, 0.0, 11);
    for (double v : z) CHECK(v == 0.0);
}

TEST_CASE("parallel_for visits every index once and rethrows") {
    setenv("LCDSC_THREADS", "4", 1);
    CHECK(worker_count() == 4);
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);

    std::vector<int> nested(16, 0);
    parallel_for(4, [&](std::size_t i) {
        parallel_for(4, [&](std::size_t j) { nested[i * 4 + j] = 1; });
    });
    for (int v : nested) CHECK(v == 1);

    CHECK_THROWS_AS(parallel_for(50,
                                 [](std::size_t i) {
                                     if (i == 17) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
    setenv("LCDSC_THREADS", "0", 1);
    CHECK(worker_count() >= 1);
    unsetenv("LCDSC_THREADS");
}

}
