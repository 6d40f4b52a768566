#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hadamard/errors.hpp"

#ifndef HADAMARD_VERSION
#define HADAMARD_VERSION "0.0.0"
#endif

namespace hadamard::cli {

Format parse_format(const std::string& name) {
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  if (name == "human") return Format::Human;
  throw ConfigError("unknown format \"" + name + "\"");
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_json(std::ostream& out, const json& value, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (value.type()) {
    case json::value_t::number_float: {
      const double x = value.get<double>();
      out << (std::isfinite(x) ? format_double(x) : "null");
      return;
    }
    case json::value_t::object: {
      if (value.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (const auto& [key, item] : value.items()) {
        if (!first) out << ",\n";
        first = false;
        out << pad << json(key).dump() << ": ";
        write_json(out, item, indent + 2);
      }
      out << "\n" << close << "}";
      return;
    }
    case json::value_t::array: {
      if (value.empty()) {
        out << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(value.begin(), value.end(),
                                     [](const json& v) { return v.is_structured(); });
      out << (flat ? "[" : "[\n");
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i > 0) out << (flat ? ", " : ",\n");
        if (!flat) out << pad;
        write_json(out, value[i], indent + 2);
      }
      out << (flat ? "]" : "\n" + close + "]");
      return;
    }
    default:
      out << value.dump();
  }
}

namespace {

std::string plain(const json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_null()) return "null";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_structured()) {
    std::string out = v.is_array() ? "[" : "{";
    bool first = true;
    for (const auto& [key, item] : v.items()) {
      out += first ? "" : ", ";
      first = false;
      if (v.is_object()) out += key + ": ";
      out += plain(item);
    }
    return out + (v.is_array() ? "]" : "}");
  }
  return v.dump();
}

std::string cell(const json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_null()) return "";
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  if (v.is_structured()) return cell(json(plain(v)));
  return v.dump();
}

// Flattens nested objects into dotted keys.
void flatten(const json& v, const std::string& prefix, std::vector<std::pair<std::string, json>>& out) {
  if (v.is_object() && !v.empty()) {
    for (const auto& [key, item] : v.items()) {
      flatten(item, prefix.empty() ? key : prefix + "." + key, out);
    }
  } else {
    out.emplace_back(prefix, v);
  }
}

}  // namespace

void write(std::ostream& out, const Report& r, Format format) {
  if (format == Format::Json) {
    json doc{{"command", r.command},
             {"version", HADAMARD_VERSION},
             {"seed", r.seed},
             {"config", r.config},
             {"result", r.result}};
    if (!r.columns.empty()) {
      json table = json::array();
      for (const auto& row : r.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < r.columns.size(); ++i) obj[r.columns[i]] = row[i];
        table.push_back(obj);
      }
      doc[r.table_name] = table;
    }
    write_json(out, doc);
    out << "\n";
    return;
  }

  std::vector<std::pair<std::string, json>> meta{
      {"command", r.command}, {"version", HADAMARD_VERSION}, {"seed", r.seed}};
  flatten(r.config, "config", meta);
  std::vector<std::pair<std::string, json>> summary;
  flatten(r.result, "", summary);

  if (format == Format::Csv) {
    for (const auto& [k, v] : meta) out << "# " << k << "=" << cell(v) << "\n";
    for (const auto& [k, v] : summary) out << "# " << k << "=" << cell(v) << "\n";
    if (r.columns.empty()) return;
    for (std::size_t i = 0; i < r.columns.size(); ++i) out << (i ? "," : "") << r.columns[i];
    out << "\n";
    for (const auto& row : r.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell(row[i]);
      out << "\n";
    }
    return;
  }

  for (const auto& [k, v] : meta) out << k << ": " << plain(v) << "\n";
  out << "\n";
  for (const auto& [k, v] : summary) out << k << ": " << plain(v) << "\n";
  if (r.columns.empty()) return;
  out << "\n" << r.table_name << ":\n";
  for (std::size_t i = 0; i < r.columns.size(); ++i) out << (i ? "  " : "") << r.columns[i];
  out << "\n";
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "  " : "") << plain(row[i]);
    out << "\n";
  }
}

}  // namespace hadamard::cli
