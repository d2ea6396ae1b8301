#ifndef UNIDYM_RECORDS_HPP
#define UNIDYM_RECORDS_HPP

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace unidym {

using FieldValue = std::variant<double, std::string>;

struct Field {
  std::string key;
  FieldValue value;
};

enum class RecordStatus { pass, fail, flag };

inline const char* to_string(RecordStatus s) {
  switch (s) {
    case RecordStatus::pass: return "pass";
    case RecordStatus::fail: return "fail";
    case RecordStatus::flag: return "flag";
  }
  return "?";
}

inline RecordStatus parse_status(const std::string& s) {
  if (s == "pass") return RecordStatus::pass;
  if (s == "fail") return RecordStatus::fail;
  return RecordStatus::flag;
}

/// One row of experiment output. measured, bound and margin are always
/// present (NaN when a quantity has no meaning for the row); margin >= 0 means
/// the checked inequality held.
struct ResultRecord {
  std::string experiment;
  std::string case_id;
  std::vector<Field> fields;
  double measured = std::numeric_limits<double>::quiet_NaN();
  double bound = std::numeric_limits<double>::quiet_NaN();
  double margin = std::numeric_limits<double>::quiet_NaN();
  RecordStatus status = RecordStatus::pass;
  std::vector<std::string> flags;

  ResultRecord& set(std::string key, double v) {
    fields.push_back({std::move(key), v});
    return *this;
  }
  ResultRecord& set(std::string key, std::string v) {
    fields.push_back({std::move(key), std::move(v)});
    return *this;
  }
  ResultRecord& set(std::string key, const char* v) { return set(std::move(key), std::string(v)); }
  ResultRecord& set(std::string key, int v) { return set(std::move(key), static_cast<double>(v)); }
  ResultRecord& set(std::string key, long v) { return set(std::move(key), static_cast<double>(v)); }
  ResultRecord& set(std::string key, bool v) { return set(std::move(key), v ? 1.0 : 0.0); }

  const FieldValue* get(const std::string& key) const {
    for (const auto& f : fields)
      if (f.key == key) return &f.value;
    return nullptr;
  }
  double number(const std::string& key) const {
    const FieldValue* v = get(key);
    if (!v || !std::holds_alternative<double>(*v)) return std::numeric_limits<double>::quiet_NaN();
    return std::get<double>(*v);
  }

  /// Sets margin and a pass/fail status from it.
  ResultRecord& judge(double measured_value, double bound_value, double margin_value,
                      double slack = 0.0) {
    measured = measured_value;
    bound = bound_value;
    margin = margin_value;
    status = margin_value >= -slack ? RecordStatus::pass : RecordStatus::fail;
    return *this;
  }
  ResultRecord& flag(std::string why) {
    flags.push_back(std::move(why));
    if (status == RecordStatus::pass) status = RecordStatus::flag;
    return *this;
  }
};

inline bool same_number(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  return a == b;
}

inline bool operator==(const ResultRecord& a, const ResultRecord& b) {
  if (a.experiment != b.experiment || a.case_id != b.case_id || a.status != b.status ||
      a.flags != b.flags || a.fields.size() != b.fields.size())
    return false;
  if (!same_number(a.measured, b.measured) || !same_number(a.bound, b.bound) ||
      !same_number(a.margin, b.margin))
    return false;
  for (std::size_t i = 0; i < a.fields.size(); ++i) {
    const auto& x = a.fields[i];
    const auto& y = b.fields[i];
    if (x.key != y.key || x.value.index() != y.value.index()) return false;
    if (std::holds_alternative<double>(x.value)) {
      if (!same_number(std::get<double>(x.value), std::get<double>(y.value))) return false;
    } else if (std::get<std::string>(x.value) != std::get<std::string>(y.value)) {
      return false;
    }
  }
  return true;
}

/// 17 significant digits; non-finite values as nan, inf, -inf.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_number(const std::string& s) {
  if (s == "nan" || s == "NaN") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf" || s == "Infinity") return std::numeric_limits<double>::infinity();
  if (s == "-inf" || s == "-Infinity") return -std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("trailing characters in number: " + s);
  return v;
}

}  // namespace unidym

#endif  // UNIDYM_RECORDS_HPP
