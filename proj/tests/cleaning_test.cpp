#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lcdsc/error.hpp"
#include "lcdsc/cleaning.hpp"
#include "lcdsc/rng.hpp"
#include "lcdsc/simulation.hpp"

using namespace lcdsc;

namespace {

SegmentDecision decision(const Interval& seg, bool significant) {
    SegmentDecision d;
    d.test.seg_start = seg.start;
    d.test.seg_end = seg.end;
    d.tested = true;
    d.significant = significant;
    return d;
}

std::size_t nonzero(const std::vector<double>& x) {
    return static_cast<std::size_t>(std::count_if(x.begin(), x.end(), [](double v) { return v != 0.0; }));
}

std::size_t first_nonzero(const std::vector<double>& x) {
    const auto it = std::find_if(x.begin(), x.end(), [](double v) { return v != 0.0; });
    return static_cast<std::size_t>(it - x.begin());
}

// Checks the report invariants that hold for every run.
void check_report(const CleaningReport& r) {
    const std::size_t n = r.cleaned_signal.size();
    std::vector<double> sum(n, 0.0);
    std::vector<bool> covered(n, false);
    std::size_t next = 0;
    for (std::size_t j = 0; j < r.cleaned_imfs.size(); ++j) {
        for (std::size_t t = 0; t < n; ++t) sum[t] += r.cleaned_imfs[j][t];
        const auto segs = r.changepoints[j].segments();
        if (r.changepoints[j].taus.empty()) {
            for (double v : r.cleaned_imfs[j]) CHECK(v == 0.0);
            while (next < r.decisions.size() && r.decisions[next].test.imf_index == j + 1) ++next;
            continue;
        }
        for (const auto& seg : segs) {
            REQUIRE(next < r.decisions.size());
            const auto& d = r.decisions[next++];
            CHECK(d.test.imf_index == j + 1);
            CHECK(d.test.seg_start == seg.start);
            CHECK(d.test.seg_end == seg.end);
            if (d.significant) {
                CHECK(d.tested);
                CHECK(d.test.p_value < d.holm_threshold);
            }
            for (std::size_t t = seg.start; t <= seg.end; ++t) {
                if (d.significant) {
                    CHECK(r.cleaned_imfs[j][t] == r.decomposition.imfs[j].samples[t]);
                    covered[t] = true;
                } else {
                    CHECK(r.cleaned_imfs[j][t] == 0.0);
                }
            }
        }
    }
    if (r.config.include_residual) {
        for (std::size_t t = 0; t < n; ++t) sum[t] += r.decomposition.residual[t];
    }
    CHECK(sum == r.cleaned_signal);
    if (!r.config.include_residual) {
        for (std::size_t t = 0; t < n; ++t) {
            if (r.cleaned_signal[t] != 0.0) CHECK(covered[t]);
        }
    }
}

LcdscConfig doppler_config() {
    LcdscConfig c;
    c.emd.seed = 7;
    return c;
}

const LocalSignal& fixture() {
    static const LocalSignal sig = [] {
        LocalSignalSpec spec;
        spec.seed = 2024;
        return local_doppler(spec);
    }();
    return sig;
}

const CleaningReport& fixture_report() {
    static const CleaningReport r = lcdsc_clean(fixture().noisy, doppler_config());
    return r;
}

}  // namespace

TEST_SUITE("cleaning") {

TEST_CASE("clean_imf without change points is all zero") {
    const std::vector<double> imf{1, 2, 3, 4, 5, 6};
    ChangePointSet cps;
    cps.n = 6;
    const auto out = clean_imf(imf, cps, {});
    CHECK(out == std::vector<double>(6, 0.0));
}

TEST_CASE("clean_imf keeps significant segments verbatim") {
    const std::vector<double> imf{1, 2, 3, 4, 5, 6, 7, 8, 9};
    ChangePointSet cps;
    cps.n = 9;
    cps.taus = {3, 6};
    const auto segs = cps.segments();
    std::vector<SegmentDecision> one{decision(segs[0], false), decision(segs[1], true),
                                     decision(segs[2], false)};
    CHECK(clean_imf(imf, cps, one) == std::vector<double>{0, 0, 0, 4, 5, 6, 0, 0, 0});
    std::vector<SegmentDecision> all{decision(segs[0], true), decision(segs[1], true),
                                     decision(segs[2], true)};
    CHECK(clean_imf(imf, cps, all) == imf);

    CHECK_THROWS_AS(clean_imf(imf, cps, std::vector<SegmentDecision>(one.begin(), one.begin() + 2)),
                    UsageError);
    ChangePointSet wrong = cps;
    wrong.n = 8;
    CHECK_THROWS_AS(clean_imf(imf, wrong, one), UsageError);
    one[1].test.seg_end = 7;
    CHECK_THROWS_AS(clean_imf(imf, cps, one), UsageError);
}

TEST_CASE("config validation") {
    LcdscConfig c;
    CHECK_NOTHROW(c.validate());
    c.gamma = 0.9;
    CHECK_THROWS_AS(c.validate(), UsageError);
    c = LcdscConfig{};
    c.alpha = 1.0;
    CHECK_THROWS_AS(c.validate(), UsageError);
    c = LcdscConfig{};
    c.min_seg_len = 1;
    CHECK_THROWS_AS(c.validate(), UsageError);
}

TEST_CASE("Doppler burst onset and report invariants") {
    const auto& r = fixture_report();
    check_report(r);
    const std::size_t onset = first_nonzero(r.cleaned_signal);
    CHECK(onset >= 975);
    CHECK(onset <= 1050);
    CHECK_FALSE(r.significant_imfs.empty());
    CHECK(r.changepoints.size() == r.decomposition.imfs.size());
    CHECK(r.amplitudes.size() == r.decomposition.imfs.size());
}

TEST_CASE("same seed and config give an identical report") {
    const auto again = lcdsc_clean(fixture().noisy, doppler_config());
    const auto& r = fixture_report();
    CHECK(again.cleaned_signal == r.cleaned_signal);
    CHECK(again.cleaned_imfs == r.cleaned_imfs);
    REQUIRE(again.decisions.size() == r.decisions.size());
    for (std::size_t i = 0; i < r.decisions.size(); ++i) {
        CHECK(again.decisions[i].test.p_value == r.decisions[i].test.p_value);
        CHECK(again.decisions[i].significant == r.decisions[i].significant);
    }
}

TEST_CASE("including the residual adds it back") {
    auto analysis = analyze(fixture().noisy, fixture_report().decomposition, doppler_config());
    LcdscConfig c = doppler_config();
    c.include_residual = true;
    const auto r = finish(analysis, c);
    check_report(r);
}

TEST_CASE("gamma sweep reuses one analysis and grows sparser") {
    const std::vector<double> gammas{1.0, 1.5, 2.0, 3.0, 4.0};
    const auto reports = gamma_sweep(fixture().noisy, gammas, doppler_config());
    REQUIRE(reports.size() == gammas.size());
    CHECK(reports[0].cleaned_signal == fixture_report().cleaned_signal);
    std::size_t prev = nonzero(reports[0].cleaned_signal);
    for (std::size_t g = 1; g < reports.size(); ++g) {
        check_report(reports[g]);
        const std::size_t now = nonzero(reports[g].cleaned_signal);
        CHECK(now <= prev);
        prev = now;
        // significant segments at a larger gamma are a subset of the smaller one
        REQUIRE(reports[g].decisions.size() == reports[g - 1].decisions.size());
        for (std::size_t i = 0; i < reports[g].decisions.size(); ++i) {
            if (reports[g].decisions[i].significant) CHECK(reports[g - 1].decisions[i].significant);
            CHECK(reports[g].decisions[i].test.p_value >= reports[g - 1].decisions[i].test.p_value);
        }
    }
    CHECK_THROWS_AS(gamma_sweep(fixture().noisy, std::vector<double>{}, doppler_config()), UsageError);
    CHECK_THROWS_AS(gamma_sweep(fixture().noisy, std::vector<double>{1.0, 0.5}, doppler_config()),
                    UsageError);
}

TEST_CASE("short series zero every IMF with a diagnostic") {
    TimeSeries s{gaussian_noise(40, 1.0, 3), 1.0};
    LcdscConfig c;
    c.emd.ensemble_size = 4;
    c.min_seg_len = 25;
    const auto r = lcdsc_clean(s, c);
    CHECK(nonzero(r.cleaned_signal) == 0);
    CHECK_FALSE(r.diagnostics.empty());
    check_report(r);
}

}
