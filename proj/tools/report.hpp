#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace hadamard::cli {

using json = nlohmann::ordered_json;

enum class Format { Json, Csv, Human };

Format parse_format(const std::string& name);

/// One report document: metadata, a summary object and an optional table.
struct Report {
  std::string command;
  std::uint64_t seed = 0;
  json config = json::object();
  json result = json::object();
  std::string table_name = "rows";
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

/// Writes the report. Floating-point values are printed with 17 significant
/// digits in every format; non-finite values become null in JSON.
void write(std::ostream& out, const Report& report, Format format);

/// JSON with 17-significant-digit floats and two-space indentation.
void write_json(std::ostream& out, const json& value, int indent = 0);

std::string format_double(double x);

}  // namespace hadamard::cli
