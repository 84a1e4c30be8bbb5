#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace abmc::io {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Scalar or homogeneous array value from a config file.
struct TomlValue {
  std::variant<std::string, double, long, bool, std::vector<double>,
               std::vector<std::string>> v;

  bool is_string() const { return std::holds_alternative<std::string>(v); }
  bool is_number() const {
    return std::holds_alternative<double>(v) || std::holds_alternative<long>(v);
  }
};

/// Flat view of a TOML document: keys are "table.key". Covers the subset the
/// experiment configs use: [table] headers, strings, numbers, booleans,
/// arrays of numbers or strings, and # comments.
class TomlTable {
 public:
  static TomlTable parse_file(const std::string& path);
  static TomlTable parse_string(const std::string& text);

  bool contains(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  long get_long(const std::string& key, long fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_double_array(const std::string& key) const;  // empty if absent

  const std::map<std::string, TomlValue>& values() const { return values_; }

 private:
  const TomlValue* find(const std::string& key) const;
  std::map<std::string, TomlValue> values_;
};

}  // namespace abmc::io
