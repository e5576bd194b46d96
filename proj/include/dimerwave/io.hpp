#pragma once

#include "dimerwave/spectral.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace dimerwave::io {

/// Shortest round-trip-safe form: 17 significant digits, fixed locale.
std::string format_double(double v);

/**
 * CSV file whose first line is "# " followed by the compact JSON header, then a column
 * header line and one row per sample. All columns must have equal length.
 */
void write_csv(const std::filesystem::path& path, const nlohmann::json& header,
               const std::vector<std::string>& names, const std::vector<Vec>& columns);

/// Inverse of write_csv; returns the header and fills names/columns.
nlohmann::json read_csv(const std::filesystem::path& path, std::vector<std::string>& names, std::vector<Vec>& columns);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json(const std::filesystem::path& path);

/// JSON array of doubles with NaN/inf mapped to null.
nlohmann::json to_json(const Vec& v);
Vec vec_from_json(const nlohmann::json& j);

/// $DIMERWAVE_OUTPUT_DIR when set and non-empty, else the current directory.
std::filesystem::path default_output_dir();

/**
 * mu-grid mini-language: "log:a:b:n" gives n log-spaced points from a to b inclusive,
 * "list:x,y,..." an explicit list, a bare number a single point. Throws InvalidInput.
 */
Vec parse_mu_grid(const std::string& text);

}  // namespace dimerwave::io
