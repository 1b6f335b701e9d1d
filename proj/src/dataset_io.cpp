#include "chargeq/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "chargeq/errors.hpp"
#include "chargeq/format.hpp"

namespace chargeq {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  for (std::size_t pos = 0;;) {
    const std::size_t comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
}

double parse_field(std::string_view field, std::size_t line_no) {
  double value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
    throw ContractViolation("csv line " + std::to_string(line_no) + ": bad number '" +
                            std::string(field) + "'");
  return value;
}

// Numbers go through the same 12-digit rounding as the CSV writer.
double rounded(double value) {
  const std::string text = format_number(value);
  double out = 0;
  std::from_chars(text.data(), text.data() + text.size(), out);
  return out;
}

}  // namespace

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ContractViolation("unknown output format '" + std::string(name) + "'");
}

std::string_view extension(OutputFormat format) {
  return format == OutputFormat::csv ? ".csv" : ".json";
}

std::string to_csv(const FigureDataset& ds) {
  std::string out;
  auto header = ds.columns;
  header.insert(header.end(), ds.marker_columns.begin(), ds.marker_columns.end());
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';

  const std::size_t lines = std::max(ds.rows.size(), ds.markers.size());
  for (std::size_t r = 0; r < lines; ++r) {
    std::string line;
    for (std::size_t c = 0; c < ds.columns.size(); ++c) {
      if (c) line += ',';
      if (r < ds.rows.size()) line += format_number(ds.rows[r][c]);
    }
    for (std::size_t c = 0; c < ds.marker_columns.size(); ++c) {
      line += ',';
      if (r < ds.markers.size()) line += format_number(ds.markers[r][c]);
    }
    out += line;
    out += '\n';
  }
  return out;
}

std::string to_json(const FigureDataset& ds) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [key, value] : ds.metadata) meta[key] = value;
  doc["metadata"] = meta;
  doc["columns"] = ds.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : ds.rows) {
    auto jrow = nlohmann::ordered_json::array();
    for (double v : row) jrow.push_back(rounded(v));
    rows.push_back(std::move(jrow));
  }
  doc["rows"] = std::move(rows);
  if (!ds.marker_columns.empty()) {
    auto markers = nlohmann::ordered_json::array();
    for (const auto& row : ds.markers) {
      auto jrow = nlohmann::ordered_json::array();
      for (double v : row) jrow.push_back(rounded(v));
      markers.push_back(std::move(jrow));
    }
    doc["markers"] = {{"columns", ds.marker_columns}, {"rows", std::move(markers)}};
  }
  return doc.dump(1) + "\n";
}

std::string serialize(const FigureDataset& ds, OutputFormat format) {
  return format == OutputFormat::csv ? to_csv(ds) : to_json(ds);
}

FigureDataset parse_csv(std::string_view text) {
  FigureDataset ds;
  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos < text.size();) {
    const std::size_t nl = text.find('\n', pos);
    const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    lines.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  if (lines.empty() || lines.front().empty()) throw ContractViolation("csv: missing header row");

  const auto header = split_fields(lines.front());
  std::size_t data_cols = 0;
  for (const auto name : header) {
    if (name.starts_with("marker_")) {
      ds.marker_columns.emplace_back(name);
    } else {
      if (!ds.marker_columns.empty())
        throw ContractViolation("csv: data column after marker columns");
      ds.columns.emplace_back(name);
      ++data_cols;
    }
  }

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_fields(lines[i]);
    if (fields.size() != header.size())
      throw ContractViolation("csv line " + std::to_string(i + 1) + ": expected " +
                              std::to_string(header.size()) + " fields, got " +
                              std::to_string(fields.size()));
    if (!fields.front().empty() || data_cols == 0) {
      std::vector<double> row;
      for (std::size_t c = 0; c < data_cols; ++c) row.push_back(parse_field(fields[c], i + 1));
      ds.rows.push_back(std::move(row));
    }
    if (!ds.marker_columns.empty() && !fields[data_cols].empty()) {
      std::vector<double> marker;
      for (std::size_t c = data_cols; c < fields.size(); ++c)
        marker.push_back(parse_field(fields[c], i + 1));
      ds.markers.push_back(std::move(marker));
    }
  }
  return ds;
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace chargeq
