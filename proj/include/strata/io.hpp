#pragma once

#include "strata/dataset.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace strata {

// RFC 4180-style CSV: fields containing comma, quote, CR or LF are quoted.
std::string csv_escape(std::string_view field);
std::string csv_join(const std::vector<std::string>& fields);
/// Parses CSV text into records. Handles quoted fields spanning lines.
std::vector<std::vector<std::string>> csv_parse(std::string_view text);

std::string read_file(const std::filesystem::path& path);
/// Writes via a temporary sibling file and rename, so readers never observe
/// a truncated file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Sidecar schema path for a dataset CSV: "<csv>.schema".
std::filesystem::path schema_path(const std::filesystem::path& csv);

std::string dataset_to_csv(const Dataset& ds);
/// Sidecar: CSV with columns name,kind,group,label,category; one row per
/// category of a nominal column (one row with empty category otherwise).
std::string schema_to_csv(const Dataset& ds);
Dataset dataset_from_csv(std::string_view data_csv, std::string_view schema_csv);

void write_dataset(const Dataset& ds, const std::filesystem::path& csv);
Dataset read_dataset(const std::filesystem::path& csv);

} // namespace strata
