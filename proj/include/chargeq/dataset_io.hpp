#pragma once

// CSV / JSON serialization of FigureDataset.
//
// CSV: header row, LF line endings, '.' decimal point, numbers via
// format_number. Marker columns (if any) trail the data columns and are
// filled on the first rows only, empty elsewhere. Metadata is JSON-only.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "chargeq/sweep.hpp"

namespace chargeq {

enum class OutputFormat { csv, json };

OutputFormat parse_output_format(std::string_view name);
std::string_view extension(OutputFormat format);

std::string to_csv(const FigureDataset& ds);
std::string to_json(const FigureDataset& ds);
std::string serialize(const FigureDataset& ds, OutputFormat format);

/// Reads a CSV produced by to_csv. Columns named marker_* go back to the marker table.
FigureDataset parse_csv(std::string_view text);

/// Writes `contents` to `path` (binary mode, so bytes are exactly as given).
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace chargeq
