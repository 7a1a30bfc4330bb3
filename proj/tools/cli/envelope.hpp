#pragma once

// OutputEnvelope: every command's payload plus its provenance, rendered as
// CSV ('#' metadata lines, header row, data rows) or as one JSON document.

#include <cmath>
#include <cstdint>
#include <ctime>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperchord/hyperchord.hpp"
#include "hyperchord/io.hpp"

namespace hyperchord::cli {

using Json = nlohmann::ordered_json;

enum class Format { csv, json };

enum ExitCode : int { kSuccess = 0, kUsage = 2, kOracle = 3 };

struct OutputEnvelope {
  std::string command;
  Json parameters = Json::object();
  Json provenance = Json::object();
  Json summary = Json::object();
  std::vector<std::string> notes;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

inline Json make_provenance(std::uint64_t seed, bool with_timestamp) {
  Json p = Json::object();
  p["version"] = HYPERCHORD_VERSION;
  p["seed"] = seed;
  if (with_timestamp) {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    p["timestamp"] = buf;
  }
  return p;
}

namespace detail {

inline std::string csv_cell(const Json& v) {
  switch (v.type()) {
    case Json::value_t::null:
      return "";
    case Json::value_t::boolean:
      return v.get<bool>() ? "true" : "false";
    case Json::value_t::number_float:
      return format_double(v.get<double>());
    case Json::value_t::number_integer:
      return std::to_string(v.get<std::int64_t>());
    case Json::value_t::number_unsigned:
      return std::to_string(v.get<std::uint64_t>());
    case Json::value_t::string: {
      const auto& s = v.get_ref<const std::string&>();
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string quoted = "\"";
      for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      return quoted + '"';
    }
    case Json::value_t::array: {
      std::string out;
      for (const auto& e : v) out += (out.empty() ? "" : ";") + csv_cell(e);
      return out;
    }
    default:
      return v.dump();
  }
}

inline void csv_record(std::ostream& os, const char* label, const Json& record) {
  os << "# " << label << ':';
  bool first = true;
  for (const auto& [key, value] : record.items()) {
    os << (first ? " " : ",") << key << '=' << csv_cell(value);
    first = false;
  }
  os << '\n';
}

/// JSON has no NaN or infinity; those become null.
inline Json sanitize(const Json& v) {
  if (v.is_number_float() && !std::isfinite(v.get<double>())) return nullptr;
  return v;
}

}  // namespace detail

inline void write_envelope(std::ostream& os, const OutputEnvelope& env, Format format) {
  if (format == Format::csv) {
    os << "# command: " << env.command << '\n';
    detail::csv_record(os, "parameters", env.parameters);
    detail::csv_record(os, "provenance", env.provenance);
    if (!env.summary.empty()) detail::csv_record(os, "summary", env.summary);
    for (const auto& note : env.notes) os << "# note: " << note << '\n';
    if (env.columns.empty()) return;
    for (std::size_t i = 0; i < env.columns.size(); ++i) os << (i ? "," : "") << env.columns[i];
    os << '\n';
    for (const auto& row : env.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << detail::csv_cell(row[i]);
      os << '\n';
    }
    return;
  }
  Json doc = Json::object();
  doc["command"] = env.command;
  doc["parameters"] = env.parameters;
  doc["provenance"] = env.provenance;
  Json summary = Json::object();
  for (const auto& [key, value] : env.summary.items()) summary[key] = detail::sanitize(value);
  doc["summary"] = summary;
  doc["notes"] = env.notes;
  doc["columns"] = env.columns;
  Json rows = Json::array();
  for (const auto& row : env.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < row.size() && i < env.columns.size(); ++i)
      obj[env.columns[i]] = detail::sanitize(row[i]);
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  os << doc.dump(2) << '\n';
}

}  // namespace hyperchord::cli
