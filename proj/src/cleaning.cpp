#include "lcdsc/cleaning.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "lcdsc/error.hpp"
#include "lcdsc/parallel.hpp"
#include "lcdsc/spectral.hpp"

namespace lcdsc {

void LcdscConfig::validate() const {
    emd.validate();
    penalty.validate();
    if (min_seg_len < 2) throw UsageError("min_seg_len must be at least 2");
    if (!(gamma >= 1.0) || !std::isfinite(gamma)) throw UsageError("gamma must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha must lie in (0, 1)");
}

std::vector<double> clean_imf(std::span<const double> imf, const ChangePointSet& cps,
                              std::span<const SegmentDecision> decisions) {
    if (cps.n != imf.size()) throw UsageError("clean_imf: change points do not match IMF length");
    std::vector<double> out(imf.size(), 0.0);
    if (cps.taus.empty()) return out;

    const auto segments = cps.segments();
    if (decisions.size() != segments.size()) {
        throw UsageError("clean_imf: expected one decision per segment");
    }
    for (std::size_t s = 0; s < segments.size(); ++s) {
        const auto& test = decisions[s].test;
        if (test.seg_start != segments[s].start || test.seg_end != segments[s].end) {
            throw UsageError("clean_imf: decision does not match segment " + std::to_string(s));
        }
        if (!decisions[s].significant) continue;
        for (std::size_t t = segments[s].start; t <= segments[s].end; ++t) out[t] = imf[t];
    }
    return out;
}

LcdscAnalysis analyze(const TimeSeries& series, const LcdscConfig& config) {
    config.validate();
    return analyze(series, eemd(series, config.emd), config);
}

LcdscAnalysis analyze(const TimeSeries& series, Decomposition decomposition,
                      const LcdscConfig& config) {
    config.validate();
    LcdscAnalysis a;
    a.series = series;
    a.decomposition = std::move(decomposition);

    const std::size_t count = a.decomposition.imfs.size();
    a.amplitudes.resize(count);
    a.changepoints.resize(count);
    std::vector<std::optional<std::string>> notes(count);
    parallel_for(count, [&](std::size_t j) {
        const auto& imf = a.decomposition.imfs[j].samples;
        a.amplitudes[j] = instantaneous_amplitude(imf);
        if (imf.size() < 2 * config.min_seg_len) {
            a.changepoints[j] = ChangePointSet{{}, 0.0, config.penalty, config.min_seg_len, imf.size()};
            notes[j] = "IMF " + std::to_string(j + 1) +
                       ": amplitude series too short for change point detection; zeroed";
            return;
        }
        a.changepoints[j] = detect_changepoints(a.amplitudes[j], config.penalty, config.min_seg_len);
    });
    for (auto& note : notes) {
        if (note) a.diagnostics.push_back(std::move(*note));
    }
    if (a.decomposition.truncated_sifts > 0) {
        a.diagnostics.push_back(std::to_string(a.decomposition.truncated_sifts) +
                                " sift(s) stopped at max_sift_iters");
    }
    if (a.decomposition.short_trials > 0) {
        a.diagnostics.push_back(std::to_string(a.decomposition.short_trials) +
                                " ensemble trial(s) produced fewer IMFs than the maximum; "
                                "missing IMFs averaged as zero");
    }
    return a;
}

CleaningReport finish(const LcdscAnalysis& analysis, const LcdscConfig& config) {
    config.validate();
    CleaningReport report;
    report.decomposition = analysis.decomposition;
    report.amplitudes = analysis.amplitudes;
    report.changepoints = analysis.changepoints;
    report.diagnostics = analysis.diagnostics;
    report.config = config;
    report.dt = analysis.series.dt;

    const std::size_t n = analysis.series.size();
    const std::size_t count = analysis.decomposition.imfs.size();

    // Tests are listed by (IMF, segment start); Holm keeps that order for ties.
    std::vector<std::size_t> first_decision(count + 1, 0);
    for (std::size_t j = 0; j < count; ++j) {
        first_decision[j] = report.decisions.size();
        const auto& cps = analysis.changepoints[j];
        if (cps.taus.empty()) continue;
        const auto& amp = analysis.amplitudes[j];
        const SegStats stats(amp);
        const auto segments = cps.segments();
        std::vector<SegmentMoments> moments;
        for (const auto& seg : segments) {
            moments.push_back({sample_variance(amp, seg.start, seg.end), seg.length()});
        }
        // With one change point the first segment is tested against the second.
        // Otherwise only segments with a neighbour on both sides are candidates;
        // the two end segments stay unselected.
        const bool single_change = segments.size() == 2;
        for (std::size_t s = 0; s < segments.size(); ++s) {
            SegmentDecision d;
            const bool interior = s > 0 && s + 1 < segments.size();
            if (interior || (single_change && s == 0)) {
                std::optional<SegmentMoments> before, after;
                if (s > 0) before = moments[s - 1];
                after = moments[s + 1];
                d.test = f_test_segment(before, moments[s], after, config.gamma, stats.var_floor());
                d.tested = true;
            } else {
                d.test.gamma = config.gamma;
                d.test.s2_during = moments[s].s2;
                d.test.n_during = moments[s].n;
            }
            d.test.imf_index = j + 1;
            d.test.seg_start = segments[s].start;
            d.test.seg_end = segments[s].end;
            report.decisions.push_back(d);
        }
    }
    first_decision[count] = report.decisions.size();

    std::vector<double> p_values;
    std::vector<std::size_t> family;
    for (std::size_t i = 0; i < report.decisions.size(); ++i) {
        if (!report.decisions[i].tested) continue;
        family.push_back(i);
        p_values.push_back(report.decisions[i].test.p_value);
    }
    const HolmResult holm = holm_bonferroni(p_values, config.alpha);
    for (std::size_t f = 0; f < family.size(); ++f) {
        report.decisions[family[f]].significant = holm.significant[f];
        report.decisions[family[f]].holm_threshold = holm.thresholds[f];
    }

    report.cleaned_imfs.resize(count);
    report.cleaned_signal.assign(n, 0.0);
    for (std::size_t j = 0; j < count; ++j) {
        const std::span<const SegmentDecision> mine(report.decisions.data() + first_decision[j],
                                                    first_decision[j + 1] - first_decision[j]);
        report.cleaned_imfs[j] =
            clean_imf(analysis.decomposition.imfs[j].samples, analysis.changepoints[j], mine);
        bool kept = false;
        for (const auto& d : mine) kept = kept || d.significant;
        if (kept) report.significant_imfs.push_back(j + 1);
        for (std::size_t t = 0; t < n; ++t) report.cleaned_signal[t] += report.cleaned_imfs[j][t];
    }
    if (config.include_residual) {
        for (std::size_t t = 0; t < n; ++t) {
            report.cleaned_signal[t] += analysis.decomposition.residual[t];
        }
    }
    return report;
}

CleaningReport lcdsc_clean(const TimeSeries& series, const LcdscConfig& config) {
    return finish(analyze(series, config), config);
}

std::vector<CleaningReport> gamma_sweep(const TimeSeries& series, std::span<const double> gammas,
                                        const LcdscConfig& config) {
    if (gammas.empty()) throw UsageError("gamma_sweep: need at least one gamma");
    for (double g : gammas) {
        if (!(g >= 1.0) || !std::isfinite(g)) throw UsageError("gamma_sweep: every gamma must be >= 1");
    }
    const LcdscAnalysis analysis = analyze(series, config);
    std::vector<CleaningReport> reports;
    for (double g : gammas) {
        LcdscConfig c = config;
        c.gamma = g;
        reports.push_back(finish(analysis, c));
    }
    return reports;
}

}  // namespace lcdsc
