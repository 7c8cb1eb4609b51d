#pragma once

#include <span>
#include <vector>

namespace lcdsc {

/// Analytic signal x + i*H[x] of a real series.
struct AnalyticSeries {
    std::vector<double> real_part;
    std::vector<double> imag_part;
};

/// Frequency-domain construction: positive-frequency bins doubled, negative
/// bins zeroed, DC and (even n) Nyquist kept. No end extension is applied, so
/// the first and last few periods carry the usual boundary distortion.
AnalyticSeries analytic_signal(std::span<const double> x);

/// Modulus of the analytic signal.
std::vector<double> instantaneous_amplitude(std::span<const double> x);

/// Derivative of the unwrapped analytic phase in cycles per unit time.
std::vector<double> instantaneous_frequency(std::span<const double> x, double dt);

}  // namespace lcdsc
