#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "lcdsc/cleaning.hpp"
#include "lcdsc/time_series.hpp"

namespace lcdsc::io {

enum class Format { Auto, Csv, Plain };

Format parse_format(const std::string& name);

/// A series read from disk. `t0` is the first time stamp of a csv input.
struct Ingested {
    TimeSeries series;
    double t0 = 0.0;
};

/// csv: `t,value` rows with an optional header; the time column must be
/// uniformly spaced within 1e-6 relative. plain: one value per line, dt = 1.
/// Auto picks csv for a `.csv` extension and plain otherwise.
/// Throws DataError naming the offending line.
Ingested ingest(const std::filesystem::path& path, Format format = Format::Auto);
Ingested parse_csv(const std::string& text);
Ingested parse_plain(const std::string& text);

/// Writes through a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

/// %.17g
std::string format_double(double v);

/// One column per entry of `columns`, all the same length.
std::string matrix_csv(std::span<const std::string> header,
                       std::span<const std::vector<double>> columns);

/// `t,value` with t = t0 + i * dt.
std::string series_csv(std::span<const double> values, double t0, double dt);

/// Column headers `imf1..imfN`.
std::vector<std::string> imf_header(std::size_t count);

nlohmann::json config_json(const LcdscConfig& config);

/// Report document. `files` maps artifact roles to file names relative to the
/// report itself.
nlohmann::json report_json(const CleaningReport& report,
                           const std::vector<std::pair<std::string, std::string>>& files);

/// Serialized form used for report.json (two-space indent, trailing newline).
std::string dump(const nlohmann::json& doc);

/// Writes report.json, imfs.csv, amplitudes.csv, cleaned_imfs.csv,
/// cleaned.csv and changepoints.csv into `dir`.
void write_cleaning_outputs(const std::filesystem::path& dir, const CleaningReport& report,
                            double t0);

}  // namespace lcdsc::io
