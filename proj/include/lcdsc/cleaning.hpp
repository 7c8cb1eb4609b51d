#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lcdsc/changepoint.hpp"
#include "lcdsc/emd.hpp"
#include "lcdsc/inference.hpp"
#include "lcdsc/time_series.hpp"

namespace lcdsc {

struct LcdscConfig {
    EmdConfig emd;
    PenaltyKind penalty = PenaltyKind::mbic();
    std::size_t min_seg_len = 10;
    double gamma = 1.0;
    double alpha = 0.05;
    bool include_residual = false;

    void validate() const;
};

/// Everything upstream of the F tests; independent of gamma and alpha.
struct LcdscAnalysis {
    TimeSeries series;
    Decomposition decomposition;
    std::vector<std::vector<double>> amplitudes;
    std::vector<ChangePointSet> changepoints;
    std::vector<std::string> diagnostics;
};

struct CleaningReport {
    Decomposition decomposition;
    std::vector<std::vector<double>> amplitudes;
    std::vector<ChangePointSet> changepoints;
    std::vector<SegmentDecision> decisions;
    std::vector<std::vector<double>> cleaned_imfs;
    std::vector<double> cleaned_signal;
    std::vector<std::size_t> significant_imfs;  ///< 1-based IMF indices with a kept segment
    std::vector<std::string> diagnostics;
    LcdscConfig config;
    double dt = 1.0;
};

/// Keeps significant segments verbatim and zeroes the rest. An IMF without
/// change points comes back all zero. `decisions` must cover every segment of
/// `cps` in order.
std::vector<double> clean_imf(std::span<const double> imf, const ChangePointSet& cps,
                              std::span<const SegmentDecision> decisions);

/// EEMD, instantaneous amplitudes and per-IMF change points.
LcdscAnalysis analyze(const TimeSeries& series, const LcdscConfig& config);

/// As above but reusing an existing decomposition of `series`.
LcdscAnalysis analyze(const TimeSeries& series, Decomposition decomposition,
                      const LcdscConfig& config);

/// Segment F tests on the amplitudes, Holm correction across every segment of
/// every IMF, and reconstruction from the kept segments.
CleaningReport finish(const LcdscAnalysis& analysis, const LcdscConfig& config);

CleaningReport lcdsc_clean(const TimeSeries& series, const LcdscConfig& config);

/// One report per gamma, sharing a single analysis.
std::vector<CleaningReport> gamma_sweep(const TimeSeries& series, std::span<const double> gammas,
                                        const LcdscConfig& config);

}  // namespace lcdsc
