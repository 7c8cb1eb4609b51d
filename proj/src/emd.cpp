#include "lcdsc/emd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lcdsc/parallel.hpp"
#include "lcdsc/rng.hpp"

namespace lcdsc {

void EmdConfig::validate() const {
    if (s_number < 1) throw UsageError("s_number must be >= 1");
    if (max_sift_iters < 1) throw UsageError("max_sift_iters must be >= 1");
    if (ensemble_size < 1) throw UsageError("ensemble_size must be >= 1");
    if (!(noise_amplitude >= 0.0) || !std::isfinite(noise_amplitude)) {
        throw UsageError("noise_amplitude must be a finite value >= 0");
    }
}

std::size_t EmdConfig::imf_limit(std::size_t n) const {
    if (max_imfs > 0) return max_imfs;
    const auto log2n = static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(n))));
    return log2n > 1 ? log2n - 1 : 1;
}

Extrema find_extrema(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 3) throw DataError("find_extrema: too short");
    Extrema out;
    std::size_t i = 1;
    while (i + 1 < n) {
        const bool rising = x[i] > x[i - 1];
        const bool falling = x[i] < x[i - 1];
        if (!rising && !falling) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && x[j + 1] == x[i]) ++j;
        if (j + 1 < n) {
            if (rising && x[j + 1] < x[i]) out.maxima.push_back((i + j) / 2);
            if (falling && x[j + 1] > x[i]) out.minima.push_back((i + j) / 2);
        }
        i = j + 1;
    }
    return out;
}

std::size_t count_zero_crossings(std::span<const double> x) {
    std::size_t count = 0;
    int last_sign = 0;
    for (double v : x) {
        const int s = (v > 0.0) - (v < 0.0);
        if (s == 0) continue;
        if (last_sign != 0 && s != last_sign) ++count;
        last_sign = s;
    }
    return count;
}

std::vector<double> natural_spline(std::span<const double> knots, std::span<const double> values,
                                   std::size_t n) {
    const std::size_t k = knots.size();
    if (k < 2 || values.size() != k) throw NumericalError("natural_spline: need >= 2 knots");

    std::vector<double> h(k - 1);
    for (std::size_t i = 0; i + 1 < k; ++i) {
        h[i] = knots[i + 1] - knots[i];
        if (!(h[i] > 0.0)) throw NumericalError("natural_spline: knots not increasing");
    }

    // Second derivatives; natural ends fix M[0] = M[k-1] = 0. Thomas algorithm
    // on the interior tridiagonal system.
    std::vector<double> m(k, 0.0);
    if (k > 2) {
        const std::size_t inner = k - 2;
        std::vector<double> diag(inner), rhs(inner);
        for (std::size_t i = 0; i < inner; ++i) {
            diag[i] = 2.0 * (h[i] + h[i + 1]);
            rhs[i] = 6.0 * ((values[i + 2] - values[i + 1]) / h[i + 1] -
                            (values[i + 1] - values[i]) / h[i]);
        }
        for (std::size_t i = 1; i < inner; ++i) {
            const double w = h[i] / diag[i - 1];
            diag[i] -= w * h[i];
            rhs[i] -= w * rhs[i - 1];
        }
        m[inner] = rhs[inner - 1] / diag[inner - 1];
        for (std::size_t i = inner - 1; i-- > 0;) {
            m[i + 1] = (rhs[i] - h[i + 1] * m[i + 2]) / diag[i];
        }
    }

    std::vector<double> out(n);
    std::size_t seg = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double x = static_cast<double>(t);
        while (seg + 2 < k && x > knots[seg + 1]) ++seg;
        const double a = knots[seg + 1] - x;
        const double b = x - knots[seg];
        const double hs = h[seg];
        out[t] = (m[seg] * a * a * a + m[seg + 1] * b * b * b) / (6.0 * hs) +
                 (values[seg] / hs - m[seg] * hs / 6.0) * a +
                 (values[seg + 1] / hs - m[seg + 1] * hs / 6.0) * b;
    }
    return out;
}

namespace {

// Knots for one envelope: up to two extrema mirrored about each end sample.
std::vector<double> envelope(std::span<const double> x, const std::vector<std::size_t>& idx) {
    const std::size_t n = x.size();
    const double last = static_cast<double>(n - 1);
    const std::size_t mirrored = std::min<std::size_t>(2, idx.size());

    std::vector<double> knots, values;
    knots.reserve(idx.size() + 2 * mirrored);
    values.reserve(idx.size() + 2 * mirrored);
    for (std::size_t i = mirrored; i-- > 0;) {
        knots.push_back(-static_cast<double>(idx[i]));
        values.push_back(x[idx[i]]);
    }
    for (std::size_t i : idx) {
        knots.push_back(static_cast<double>(i));
        values.push_back(x[i]);
    }
    for (std::size_t i = 0; i < mirrored; ++i) {
        const std::size_t src = idx[idx.size() - 1 - i];
        knots.push_back(2.0 * last - static_cast<double>(src));
        values.push_back(x[src]);
    }
    return natural_spline(knots, values, n);
}

}  // namespace

std::vector<double> envelope_mean(std::span<const double> x) {
    if (x.size() < 3) throw MonotonicComponent();
    const Extrema ext = find_extrema(x);
    if (ext.maxima.empty() || ext.minima.empty()) throw MonotonicComponent();
    std::vector<double> upper = envelope(x, ext.maxima);
    const std::vector<double> lower = envelope(x, ext.minima);
    for (std::size_t t = 0; t < upper.size(); ++t) upper[t] = 0.5 * (upper[t] + lower[t]);
    return upper;
}

SiftResult sift(std::span<const double> x, const EmdConfig& config) {
    SiftResult result;
    result.samples.assign(x.begin(), x.end());
    auto& h = result.samples;
    int consecutive = 0;
    for (int iter = 1; iter <= config.max_sift_iters; ++iter) {
        std::vector<double> m;
        try {
            m = envelope_mean(h);
        } catch (const MonotonicComponent&) {
            if (iter == 1) throw;
            break;
        }
        for (std::size_t t = 0; t < h.size(); ++t) h[t] -= m[t];
        result.iterations = iter;

        const Extrema ext = find_extrema(h);
        const auto extrema = static_cast<long>(ext.maxima.size() + ext.minima.size());
        const auto crossings = static_cast<long>(count_zero_crossings(h));
        if (std::labs(extrema - crossings) <= 1) {
            if (++consecutive >= config.s_number) {
                result.converged = true;
                break;
            }
        } else {
            consecutive = 0;
        }
    }
    return result;
}

namespace {

struct TrialOutput {
    std::vector<std::vector<double>> imfs;
    std::vector<double> residual;
    std::size_t truncated = 0;
};

TrialOutput run_emd(std::vector<double> remainder, const EmdConfig& config) {
    TrialOutput out;
    const std::size_t limit = config.imf_limit(remainder.size());
    // A remainder at rounding level has nothing left to extract.
    const double negligible = 1e-12 * range(remainder);
    while (out.imfs.size() < limit && range(remainder) > negligible) {
        SiftResult s;
        try {
            s = sift(remainder, config);
        } catch (const MonotonicComponent&) {
            break;
        }
        if (!s.converged) ++out.truncated;
        for (std::size_t t = 0; t < remainder.size(); ++t) remainder[t] -= s.samples[t];
        out.imfs.push_back(std::move(s.samples));
    }
    out.residual = std::move(remainder);
    return out;
}

}  // namespace

Decomposition emd(const TimeSeries& series, const EmdConfig& config) {
    config.validate();
    require_finite(series.samples, 4, "emd");
    TrialOutput trial = run_emd(series.samples, config);

    Decomposition d;
    d.source_len = series.size();
    d.truncated_sifts = trial.truncated;
    for (std::size_t j = 0; j < trial.imfs.size(); ++j) {
        d.imfs.push_back(Imf{std::move(trial.imfs[j]), j + 1});
    }
    d.residual = std::move(trial.residual);
    return d;
}

Decomposition eemd(const TimeSeries& series, const EmdConfig& config) {
    config.validate();
    require_finite(series.samples, 4, "eemd");
    const std::size_t n = series.size();
    const double noise_sd = config.noise_amplitude * stddev(series.samples);

    std::vector<std::vector<double>> sums;
    std::vector<std::size_t> trial_counts;
    std::size_t truncated = 0;

    // Trials run in fixed-size batches and are folded into the sums in trial
    // order, so the floating-point result is independent of the thread count.
    constexpr std::size_t batch = 16;
    for (std::size_t first = 0; first < config.ensemble_size; first += batch) {
        const std::size_t count = std::min(batch, config.ensemble_size - first);
        std::vector<TrialOutput> outputs(count);
        parallel_for(count, [&](std::size_t b) {
            const std::size_t k = first + b;
            std::vector<double> perturbed = series.samples;
            if (noise_sd > 0.0) {
                const auto noise = gaussian_noise(n, noise_sd, stream_seed(config.seed, k));
                for (std::size_t t = 0; t < n; ++t) perturbed[t] += noise[t];
            }
            outputs[b] = run_emd(std::move(perturbed), config);
        });
        for (auto& out : outputs) {
            truncated += out.truncated;
            trial_counts.push_back(out.imfs.size());
            if (sums.size() < out.imfs.size()) {
                sums.resize(out.imfs.size(), std::vector<double>(n, 0.0));
            }
            for (std::size_t j = 0; j < out.imfs.size(); ++j) {
                for (std::size_t t = 0; t < n; ++t) sums[j][t] += out.imfs[j][t];
            }
        }
    }

    Decomposition d;
    d.source_len = n;
    d.truncated_sifts = truncated;
    for (std::size_t c : trial_counts) {
        if (c < sums.size()) ++d.short_trials;
    }
    const auto trials = static_cast<double>(config.ensemble_size);
    for (std::size_t j = 0; j < sums.size(); ++j) {
        for (double& v : sums[j]) v /= trials;
        d.imfs.push_back(Imf{std::move(sums[j]), j + 1});
    }
    d.residual = series.samples;
    for (const Imf& imf : d.imfs) {
        for (std::size_t t = 0; t < n; ++t) d.residual[t] -= imf.samples[t];
    }
    return d;
}

std::vector<double> reconstruct(const Decomposition& d) {
    std::vector<double> out(d.source_len, 0.0);
    for (const Imf& imf : d.imfs) {
        for (std::size_t t = 0; t < out.size(); ++t) out[t] += imf.samples[t];
    }
    for (std::size_t t = 0; t < out.size() && t < d.residual.size(); ++t) out[t] += d.residual[t];
    return out;
}

double orthogonality_index(const Decomposition& d) {
    if (d.imfs.size() < 2) throw UsageError("orthogonality_index: need at least two IMFs");
    const std::vector<double> x = reconstruct(d);
    double energy = 0.0;
    double cross = 0.0;
    for (std::size_t t = 0; t < d.source_len; ++t) {
        energy += x[t] * x[t];
        double sum = 0.0, sum_sq = 0.0;
        for (const Imf& imf : d.imfs) {
            sum += imf.samples[t];
            sum_sq += imf.samples[t] * imf.samples[t];
        }
        cross += sum * sum - sum_sq;
    }
    if (!(energy > 0.0)) throw NumericalError("orthogonality_index: degenerate signal");
    return cross / energy;
}

}  // namespace lcdsc
