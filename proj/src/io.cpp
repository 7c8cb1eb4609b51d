#include "lcdsc/io.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "lcdsc/error.hpp"

namespace lcdsc::io {

namespace fs = std::filesystem;

Format parse_format(const std::string& name) {
    if (name == "auto") return Format::Auto;
    if (name == "csv") return Format::Csv;
    if (name == "plain") return Format::Plain;
    throw UsageError("unknown format '" + name + "' (expected auto, csv or plain)");
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::optional<double> to_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

std::vector<std::string_view> lines_of(const std::string& text) {
    std::vector<std::string_view> out;
    std::string_view rest(text);
    while (!rest.empty()) {
        const auto nl = rest.find('\n');
        out.push_back(rest.substr(0, nl));
        if (nl == std::string_view::npos) break;
        rest.remove_prefix(nl + 1);
    }
    return out;
}

std::string line_tag(std::size_t line) { return "line " + std::to_string(line) + ": "; }

}  // namespace

Ingested parse_csv(const std::string& text) {
    std::vector<double> times;
    Ingested result;
    const auto lines = lines_of(text);
    bool seen_row = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string_view line = trim(lines[i]);
        if (line.empty()) continue;
        const auto comma = line.find(',');
        const std::size_t lineno = i + 1;
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
            throw DataError(line_tag(lineno) + "expected two columns t,value");
        }
        const auto t = to_double(line.substr(0, comma));
        const auto v = to_double(line.substr(comma + 1));
        if (!t || !v) {
            if (!seen_row && !t && !v) {
                seen_row = true;  // header
                continue;
            }
            throw DataError(line_tag(lineno) + "cannot parse number");
        }
        seen_row = true;
        if (!std::isfinite(*t) || !std::isfinite(*v)) {
            throw DataError(line_tag(lineno) + "non-finite value");
        }
        if (times.size() >= 2) {
            const double step = times[1] - times[0];
            const double got = *t - times.back();
            if (std::abs(got - step) > 1e-6 * std::abs(step)) {
                throw DataError(line_tag(lineno) + "non-uniform time step");
            }
        } else if (times.size() == 1 && !(*t > times[0])) {
            throw DataError(line_tag(lineno) + "time must increase");
        }
        times.push_back(*t);
        result.series.samples.push_back(*v);
    }
    if (times.empty()) throw DataError("empty input");
    result.t0 = times.front();
    result.series.dt = times.size() >= 2 ? times[1] - times[0] : 1.0;
    return result;
}

Ingested parse_plain(const std::string& text) {
    Ingested result;
    const auto lines = lines_of(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string_view line = trim(lines[i]);
        if (line.empty()) continue;
        const auto v = to_double(line);
        if (!v) throw DataError(line_tag(i + 1) + "cannot parse number");
        if (!std::isfinite(*v)) throw DataError(line_tag(i + 1) + "non-finite value");
        result.series.samples.push_back(*v);
    }
    if (result.series.samples.empty()) throw DataError("empty input");
    return result;
}

Ingested ingest(const fs::path& path, Format format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (format == Format::Auto) format = path.extension() == ".csv" ? Format::Csv : Format::Plain;
    try {
        return format == Format::Csv ? parse_csv(buf.str()) : parse_plain(buf.str());
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_atomic(const fs::path& path, const std::string& contents) {
    static std::atomic<unsigned> counter{0};
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write '" + tmp.string() + "'");
        out << contents;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw DataError("write failed for '" + path.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw DataError("cannot rename into '" + path.string() + "'");
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string matrix_csv(std::span<const std::string> header,
                       std::span<const std::vector<double>> columns) {
    if (header.size() != columns.size()) throw UsageError("matrix_csv: header/column mismatch");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns) {
        if (c.size() != rows) throw UsageError("matrix_csv: ragged columns");
    }
    std::string out;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j) out += ',';
        out += header[j];
    }
    out += '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (j) out += ',';
            out += format_double(columns[j][r]);
        }
        out += '\n';
    }
    return out;
}

std::string series_csv(std::span<const double> values, double t0, double dt) {
    std::string out = "t,value\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += format_double(t0 + static_cast<double>(i) * dt);
        out += ',';
        out += format_double(values[i]);
        out += '\n';
    }
    return out;
}

std::vector<std::string> imf_header(std::size_t count) {
    std::vector<std::string> h;
    for (std::size_t j = 1; j <= count; ++j) h.push_back("imf" + std::to_string(j));
    return h;
}

nlohmann::json config_json(const LcdscConfig& config) {
    nlohmann::json emd = {
        {"s_number", config.emd.s_number},
        {"max_sift_iters", config.emd.max_sift_iters},
        {"max_imfs", config.emd.max_imfs},
        {"ensemble_size", config.emd.ensemble_size},
        {"noise_amplitude", config.emd.noise_amplitude},
        {"seed", config.emd.seed},
    };
    nlohmann::json doc = {
        {"emd", emd},
        {"penalty", config.penalty.name()},
        {"min_seg_len", config.min_seg_len},
        {"gamma", config.gamma},
        {"alpha", config.alpha},
        {"include_residual", config.include_residual},
    };
    if (config.penalty.type == PenaltyType::Aic) doc["beta"] = config.penalty.beta;
    return doc;
}

namespace {

nlohmann::json optional_number(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json report_json(const CleaningReport& report,
                           const std::vector<std::pair<std::string, std::string>>& files) {
    nlohmann::json doc;
    doc["config"] = config_json(report.config);
    doc["n"] = report.cleaned_signal.size();
    doc["dt"] = report.dt;

    nlohmann::json cps = nlohmann::json::array();
    for (std::size_t j = 0; j < report.changepoints.size(); ++j) {
        cps.push_back({{"imf", j + 1},
                       {"taus", report.changepoints[j].taus},
                       {"total_cost", report.changepoints[j].total_cost}});
    }
    doc["changepoints"] = std::move(cps);

    nlohmann::json segs = nlohmann::json::array();
    for (const auto& d : report.decisions) {
        const SegmentTest& t = d.test;
        nlohmann::json s = {
            {"imf", t.imf_index},
            {"start", t.seg_start},
            {"end", t.seg_end},
            {"s2", {optional_number(t.s2_before), t.s2_during, optional_number(t.s2_after)}},
            {"n", {t.n_before, t.n_during, t.n_after}},
            {"tested", d.tested},
            {"significant", d.significant},
        };
        if (d.tested) {
            s["f_stat"] = t.f_stat;
            s["p"] = t.p_value;
            s["holm_threshold"] = d.holm_threshold;
        } else {
            s["f_stat"] = nullptr;
            s["p"] = nullptr;
            s["holm_threshold"] = nullptr;
        }
        segs.push_back(std::move(s));
    }
    doc["segments"] = std::move(segs);
    doc["eta"] = report.significant_imfs;
    doc["diagnostics"] = report.diagnostics;

    nlohmann::json f = nlohmann::json::object();
    for (const auto& [role, name] : files) f[role] = name;
    doc["files"] = std::move(f);
    return doc;
}

std::string dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

void write_cleaning_outputs(const fs::path& dir, const CleaningReport& report, double t0) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create '" + dir.string() + "'");

    const std::size_t count = report.decomposition.imfs.size();
    std::vector<std::vector<double>> imfs;
    for (const auto& imf : report.decomposition.imfs) imfs.push_back(imf.samples);
    imfs.push_back(report.decomposition.residual);
    auto header = imf_header(count);
    header.push_back("residual");
    write_atomic(dir / "imfs.csv", matrix_csv(header, imfs));

    header.pop_back();
    write_atomic(dir / "amplitudes.csv", matrix_csv(header, report.amplitudes));
    write_atomic(dir / "cleaned_imfs.csv", matrix_csv(header, report.cleaned_imfs));
    write_atomic(dir / "cleaned.csv", series_csv(report.cleaned_signal, t0, report.dt));

    std::string cps = "imf,tau\n";
    for (std::size_t j = 0; j < report.changepoints.size(); ++j) {
        for (std::size_t tau : report.changepoints[j].taus) {
            cps += std::to_string(j + 1) + "," + std::to_string(tau) + "\n";
        }
    }
    write_atomic(dir / "changepoints.csv", cps);

    const std::vector<std::pair<std::string, std::string>> files = {
        {"imfs", "imfs.csv"},
        {"amplitudes", "amplitudes.csv"},
        {"cleaned_imfs", "cleaned_imfs.csv"},
        {"cleaned", "cleaned.csv"},
        {"changepoints", "changepoints.csv"},
    };
    write_atomic(dir / "report.json", dump(report_json(report, files)));
}

}  // namespace lcdsc::io
