#ifndef UNIDYM_EMIT_HPP
#define UNIDYM_EMIT_HPP

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "unidym/errors.hpp"
#include "unidym/records.hpp"

namespace unidym {

enum class Format { csv, jsonl };

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "jsonl" || s == "json-lines") return Format::jsonl;
  throw UsageError("unknown format " + s + " (expected csv or jsonl)");
}

inline const char* extension(Format f) { return f == Format::csv ? "csv" : "jsonl"; }

/// Contents of the single metadata line that opens every output file.
struct EmitMeta {
  std::string experiment;
  std::uint64_t seed = 0;
  std::string config;
  bool timestamp = true;
};

namespace detail {

inline std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

inline std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string meta_json(const EmitMeta& m, std::size_t count, Format f) {
  std::string s = "{\"experiment\":" + json_string(m.experiment) +
                  ",\"seed\":" + std::to_string(m.seed) + ",\"config\":" + json_string(m.config) +
                  ",\"format\":\"" + extension(f) + "\",\"records\":" + std::to_string(count);
  if (m.timestamp) s += ",\"generated\":" + json_string(utc_now());
  return s + "}";
}

inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string json_number(double v) {
  return std::isfinite(v) ? format_number(v) : json_string(format_number(v));
}

inline std::string join_flags(const std::vector<std::string>& flags) {
  std::string s;
  for (std::size_t i = 0; i < flags.size(); ++i) s += (i ? ";" : "") + flags[i];
  return s;
}

}  // namespace detail

/// Union of field keys across records, in order of first appearance.
inline std::vector<std::string> field_columns(const std::vector<ResultRecord>& records) {
  std::vector<std::string> cols;
  for (const auto& r : records)
    for (const auto& f : r.fields)
      if (std::find(cols.begin(), cols.end(), f.key) == cols.end()) cols.push_back(f.key);
  return cols;
}

/// Metadata comment line, header row, one row per record. Missing fields are
/// empty cells; flags are joined with ';'.
inline std::string to_csv(const std::vector<ResultRecord>& records, const EmitMeta& meta) {
  std::ostringstream out;
  out << "# " << detail::meta_json(meta, records.size(), Format::csv) << "\r\n";
  const auto cols = field_columns(records);
  out << "experiment,case";
  for (const auto& c : cols) out << ',' << detail::csv_cell(c);
  out << ",measured,bound,margin,status,flags\r\n";
  for (const auto& r : records) {
    out << detail::csv_cell(r.experiment) << ',' << detail::csv_cell(r.case_id);
    for (const auto& c : cols) {
      out << ',';
      if (const FieldValue* v = r.get(c)) {
        if (std::holds_alternative<double>(*v)) out << format_number(std::get<double>(*v));
        else out << detail::csv_cell(std::get<std::string>(*v));
      }
    }
    out << ',' << format_number(r.measured) << ',' << format_number(r.bound) << ','
        << format_number(r.margin) << ',' << to_string(r.status) << ','
        << detail::csv_cell(detail::join_flags(r.flags)) << "\r\n";
  }
  return out.str();
}

inline std::string record_to_json(const ResultRecord& r) {
  std::string s = "{\"experiment\":" + detail::json_string(r.experiment) +
                  ",\"case\":" + detail::json_string(r.case_id) + ",\"fields\":{";
  for (std::size_t i = 0; i < r.fields.size(); ++i) {
    const auto& f = r.fields[i];
    if (i) s += ',';
    s += detail::json_string(f.key) + ':';
    if (std::holds_alternative<double>(f.value)) {
      const double v = std::get<double>(f.value);
      // Non-finite numbers are wrapped so they stay distinct from strings.
      s += std::isfinite(v) ? format_number(v)
                            : "{\"float\":" + detail::json_string(format_number(v)) + "}";
    } else {
      s += detail::json_string(std::get<std::string>(f.value));
    }
  }
  s += "},\"measured\":" + detail::json_number(r.measured) +
       ",\"bound\":" + detail::json_number(r.bound) + ",\"margin\":" + detail::json_number(r.margin) +
       ",\"status\":\"" + to_string(r.status) + "\",\"flags\":[";
  for (std::size_t i = 0; i < r.flags.size(); ++i) s += (i ? "," : "") + detail::json_string(r.flags[i]);
  return s + "]}";
}

inline std::string to_jsonl(const std::vector<ResultRecord>& records, const EmitMeta& meta) {
  std::string out = "{\"meta\":" + detail::meta_json(meta, records.size(), Format::jsonl) + "}\n";
  for (const auto& r : records) out += record_to_json(r) + "\n";
  return out;
}

inline ResultRecord record_from_json(const nlohmann::ordered_json& j) {
  auto num = [](const nlohmann::ordered_json& v) {
    return v.is_string() ? parse_number(v.get<std::string>()) : v.get<double>();
  };
  ResultRecord r;
  r.experiment = j.at("experiment").get<std::string>();
  r.case_id = j.at("case").get<std::string>();
  for (const auto& [k, v] : j.at("fields").items()) {
    if (v.is_object()) r.fields.push_back({k, parse_number(v.at("float").get<std::string>())});
    else if (v.is_string()) r.fields.push_back({k, v.get<std::string>()});
    else r.fields.push_back({k, v.get<double>()});
  }
  r.measured = num(j.at("measured"));
  r.bound = num(j.at("bound"));
  r.margin = num(j.at("margin"));
  r.status = parse_status(j.at("status").get<std::string>());
  for (const auto& f : j.at("flags")) r.flags.push_back(f.get<std::string>());
  return r;
}

/// Parses json-lines output; the metadata line is skipped.
inline std::vector<ResultRecord> parse_jsonl(const std::string& text) {
  std::vector<ResultRecord> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw NumericError(std::string("malformed json line: ") + e.what());
    }
    if (j.contains("meta")) continue;
    out.push_back(record_from_json(j));
  }
  return out;
}

/// Text after the metadata line.
inline std::string body(const std::string& text) {
  const auto nl = text.find('\n');
  return nl == std::string::npos ? std::string() : text.substr(nl + 1);
}

inline std::string render(const std::vector<ResultRecord>& records, Format f, const EmitMeta& meta) {
  return f == Format::csv ? to_csv(records, meta) : to_jsonl(records, meta);
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

/// Writes <out_dir>/<experiment>.<ext> and returns its path.
inline std::filesystem::path emit(const std::vector<ResultRecord>& records, Format f,
                                  const std::filesystem::path& out_dir, const EmitMeta& meta) {
  const std::filesystem::path path = out_dir / (meta.experiment + "." + extension(f));
  write_text(path, render(records, f, meta));
  return path;
}

}  // namespace unidym

#endif  // UNIDYM_EMIT_HPP
