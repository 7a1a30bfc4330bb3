#pragma once

// Text serialisation for sample batches, estimation reports and gap tables.
// Numbers are written with 17 significant digits so every value round-trips.

#include <cstdint>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperchord/errors.hpp"
#include "hyperchord/inference.hpp"
#include "hyperchord/sampling.hpp"

namespace hyperchord {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Batch CSV layout:
//   # n,r,sampler,seed,stream_id
//   # 3,1,geometric,42,0
//   chord_length
//   0.87...
inline void write_batch_csv(std::ostream& os, const SampleBatch& batch) {
  os << "# n,r,sampler,seed,stream_id\n";
  os << "# " << batch.n << ',' << format_double(batch.r) << ',' << to_string(batch.sampler) << ','
     << batch.seed.seed << ',' << batch.seed.stream_id << '\n';
  os << "chord_length\n";
  for (double v : batch.values) os << format_double(v) << '\n';
}

inline SampleBatch read_batch_csv(std::istream& is) {
  std::string line;
  auto next = [&](const char* what) {
    if (!std::getline(is, line)) throw domain_error(std::string("batch csv: missing ") + what);
  };
  next("metadata header");
  next("metadata row");
  if (line.rfind("# ", 0) != 0) throw domain_error("batch csv: malformed metadata row");
  std::istringstream meta(line.substr(2));
  std::vector<std::string> fields;
  for (std::string f; std::getline(meta, f, ',');) fields.push_back(f);
  if (fields.size() != 5) throw domain_error("batch csv: expected 5 metadata fields");
  SampleBatch batch;
  try {
    batch.n = std::stoi(fields[0]);
    batch.r = std::stod(fields[1]);
    batch.seed.seed = std::stoull(fields[3]);
    batch.seed.stream_id = std::stoull(fields[4]);
  } catch (const std::exception&) {
    throw domain_error("batch csv: malformed metadata value");
  }
  const auto kind = parse_sampler_kind(fields[2]);
  if (!kind) throw domain_error("batch csv: unknown sampler '" + fields[2] + "'");
  batch.sampler = *kind;
  next("column header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    try {
      batch.values.push_back(std::stod(line));
    } catch (const std::exception&) {
      throw domain_error("batch csv: malformed value '" + line + "'");
    }
  }
  return batch;
}

namespace detail {

template <class T>
nlohmann::json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

inline std::string optional_csv(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace detail

inline nlohmann::json to_json(const EstimationReport& r) {
  return {{"n", r.n},
          {"r_true", detail::optional_json(r.r_true)},
          {"m", r.m},
          {"r_hat", r.r_hat},
          {"var_closed_form", r.var_closed_form},
          {"crlb", detail::optional_json(r.crlb)},
          {"efficiency", detail::optional_json(r.efficiency)},
          {"empirical_var", detail::optional_json(r.empirical_var)},
          {"plug_in", r.plug_in},
          {"crlb_note", r.crlb_note}};
}

inline nlohmann::json to_json(const GapRow& row) {
  return {{"n", row.n}, {"c_n", row.c_n}, {"gap", row.gap}};
}

inline const char* kEstimationCsvHeader =
    "n,r_true,m,r_hat,var_closed_form,crlb,efficiency,empirical_var,plug_in";

inline void write_csv(std::ostream& os, std::span<const EstimationReport> reports) {
  os << kEstimationCsvHeader << '\n';
  for (const auto& r : reports) {
    os << r.n << ',' << detail::optional_csv(r.r_true) << ',' << r.m << ','
       << format_double(r.r_hat) << ',' << format_double(r.var_closed_form) << ','
       << detail::optional_csv(r.crlb) << ',' << detail::optional_csv(r.efficiency) << ','
       << detail::optional_csv(r.empirical_var) << ',' << (r.plug_in ? "true" : "false") << '\n';
  }
}

inline void write_csv(std::ostream& os, std::span<const GapRow> rows) {
  os << "n,c_n,gap\n";
  for (const auto& row : rows)
    os << row.n << ',' << format_double(row.c_n) << ',' << format_double(row.gap) << '\n';
}

}  // namespace hyperchord
