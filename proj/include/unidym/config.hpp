#ifndef UNIDYM_CONFIG_HPP
#define UNIDYM_CONFIG_HPP

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "unidym/errors.hpp"
#include "unidym/records.hpp"

namespace unidym {

/// Flat key-value configuration in INI form: one [section] per module, keys
/// addressed as "section.key".
///
///   [harness]
///   seed = 7
///   [schwarzian]
///   cases = 500
///
/// Lists are comma separated; "lo:hi:count" expands to an evenly spaced grid.
class Config {
 public:
  Config() = default;

  static Config from_string(const std::string& text) {
    std::istringstream in(text);
    Config c;
    try {
      boost::property_tree::ini_parser::read_ini(in, c.tree_);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw UsageError(std::string("config parse error: ") + e.what());
    }
    c.validate();
    return c;
  }

  static Config from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
  }

  bool has(const std::string& key) const { return tree_.get_optional<std::string>(key).has_value(); }

  void set(const std::string& key, const std::string& value) { tree_.put(key, value); }

  std::string get_string(const std::string& key, const std::string& fallback = "") const {
    auto v = tree_.get_optional<std::string>(key);
    return v ? boost::trim_copy(*v) : fallback;
  }

  double get_double(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return parse_double(key, get_string(key));
  }

  int get_int(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const double v = get_double(key, fallback);
    if (v != static_cast<double>(static_cast<int>(v)))
      throw UsageError("config key " + key + " must be an integer");
    return static_cast<int>(v);
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string s = get_string(key);
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(s, &pos, 0);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw UsageError("config key " + key + " is not an unsigned integer: " + s);
    }
  }

  bool get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string s = boost::to_lower_copy(get_string(key));
    if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
    if (s == "0" || s == "false" || s == "no" || s == "off") return false;
    throw UsageError("config key " + key + " is not a boolean: " + s);
  }

  /// A missing key gives the fallback; a present but blank value gives an
  /// empty list.
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const {
    if (!has(key)) return fallback;
    return parse_list(key, get_string(key));
  }

  static std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::vector<std::string> parts;
    boost::split(parts, text, boost::is_any_of(","));
    for (auto& p : parts) {
      boost::trim(p);
      if (p.empty()) continue;
      std::vector<std::string> r;
      boost::split(r, p, boost::is_any_of(":"));
      if (r.size() == 3) {
        const double lo = parse_double(key, r[0]);
        const double hi = parse_double(key, r[1]);
        const double cnt = parse_double(key, r[2]);
        if (!(cnt >= 0) || cnt != static_cast<double>(static_cast<long>(cnt)))
          throw UsageError("config key " + key + ": grid count must be a non-negative integer");
        const long n = static_cast<long>(cnt);
        for (long i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
      } else if (r.size() == 1) {
        out.push_back(parse_double(key, p));
      } else {
        throw UsageError("config key " + key + ": malformed list entry " + p);
      }
    }
    return out;
  }

  /// All keys in "section.key" form, in file order.
  std::vector<std::string> keys() const {
    std::vector<std::string> out;
    for (const auto& [section, sub] : tree_) {
      if (sub.empty()) out.push_back(section);
      for (const auto& [k, v] : sub) out.push_back(section + "." + k);
    }
    return out;
  }

  /// Every tolerance-like key (name contains "tol" or is "epsilon") must be a
  /// positive number.
  void validate() const {
    for (const auto& key : keys()) {
      const std::string leaf = key.substr(key.find_last_of('.') + 1);
      const bool tolerance = leaf.find("tol") != std::string::npos || leaf == "epsilon";
      if (!tolerance) continue;
      const double v = parse_double(key, get_string(key));
      if (!(v > 0.0)) throw UsageError("tolerance " + key + " must be positive");
    }
  }

 private:
  static double parse_double(const std::string& key, const std::string& s) {
    try {
      return parse_number(boost::trim_copy(s));
    } catch (const std::exception&) {
      throw UsageError("config key " + key + " is not a number: " + s);
    }
  }

  boost::property_tree::ptree tree_;
};

}  // namespace unidym

#endif  // UNIDYM_CONFIG_HPP
