#include "lcdsc/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>

#include "lcdsc/error.hpp"
#include "lcdsc/time_series.hpp"

namespace lcdsc {

namespace {

// FFTW's planner is not thread-safe; execution of distinct plans is.
std::mutex planner_mutex;

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const {
        std::lock_guard lock(planner_mutex);
        fftw_destroy_plan(p);
    }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

Plan make_plan(std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out,
               int sign) {
    std::lock_guard lock(planner_mutex);
    auto* p = fftw_plan_dft_1d(static_cast<int>(in.size()),
                               reinterpret_cast<fftw_complex*>(in.data()),
                               reinterpret_cast<fftw_complex*>(out.data()), sign, FFTW_ESTIMATE);
    if (p == nullptr) throw NumericalError("analytic_signal: FFT planning failed");
    return Plan(p);
}

}  // namespace

AnalyticSeries analytic_signal(std::span<const double> x) {
    require_finite(x, 4, "analytic_signal");
    const std::size_t n = x.size();

    std::vector<std::complex<double>> time(n), freq(n);
    for (std::size_t t = 0; t < n; ++t) time[t] = x[t];
    fftw_execute(make_plan(time, freq, FFTW_FORWARD).get());

    // Bins 1..ceil(n/2)-1 are strictly positive frequencies.
    const std::size_t positive_end = (n + 1) / 2;
    for (std::size_t k = 1; k < positive_end; ++k) freq[k] *= 2.0;
    for (std::size_t k = n / 2 + 1; k < n; ++k) freq[k] = 0.0;

    fftw_execute(make_plan(freq, time, FFTW_BACKWARD).get());

    AnalyticSeries out;
    out.real_part.resize(n);
    out.imag_part.resize(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t t = 0; t < n; ++t) {
        out.real_part[t] = time[t].real() * scale;
        out.imag_part[t] = time[t].imag() * scale;
    }
    return out;
}

std::vector<double> instantaneous_amplitude(std::span<const double> x) {
    const AnalyticSeries a = analytic_signal(x);
    std::vector<double> amp(x.size());
    for (std::size_t t = 0; t < amp.size(); ++t) amp[t] = std::hypot(a.real_part[t], a.imag_part[t]);
    return amp;
}

std::vector<double> instantaneous_frequency(std::span<const double> x, double dt) {
    if (!(dt > 0.0)) throw UsageError("instantaneous_frequency: dt must be positive");
    const AnalyticSeries a = analytic_signal(x);
    const std::size_t n = x.size();
    constexpr double pi = std::numbers::pi;

    std::vector<double> phase(n);
    double offset = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double raw = std::atan2(a.imag_part[t], a.real_part[t]);
        if (t > 0) {
            const double jump = raw + offset - phase[t - 1];
            if (jump > pi) offset -= 2.0 * pi * std::ceil((jump - pi) / (2.0 * pi));
            else if (jump < -pi) offset += 2.0 * pi * std::ceil((-jump - pi) / (2.0 * pi));
        }
        phase[t] = raw + offset;
    }

    std::vector<double> freq(n);
    const double scale = 1.0 / (2.0 * pi * dt);
    freq[0] = (phase[1] - phase[0]) * scale;
    freq[n - 1] = (phase[n - 1] - phase[n - 2]) * scale;
    for (std::size_t t = 1; t + 1 < n; ++t) freq[t] = 0.5 * (phase[t + 1] - phase[t - 1]) * scale;
    return freq;
}

}  // namespace lcdsc
