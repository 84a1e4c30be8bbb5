#include "abmc/io/toml.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace abmc::io {

namespace {

std::string strip(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Removes a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
  bool in_quote = false;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_quote = !in_quote;
    if (s[i] == '#' && !in_quote) return s.substr(0, i);
  }
  return s;
}

bool parse_number(const std::string& tok, TomlValue& out) {
  if (tok.empty()) return false;
  bool integral = true;
  for (const char c : tok) {
    if (c == '.' || c == 'e' || c == 'E') integral = false;
  }
  try {
    size_t used = 0;
    if (integral) {
      const long v = std::stol(tok, &used);
      if (used != tok.size()) return false;
      out.v = v;
    } else {
      const double v = std::stod(tok, &used);
      if (used != tok.size()) return false;
      out.v = v;
    }
  } catch (...) {
    return false;
  }
  return true;
}

TomlValue parse_scalar(const std::string& tok, long line_no) {
  TomlValue out;
  if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"') {
    out.v = tok.substr(1, tok.size() - 2);
    return out;
  }
  if (tok == "true") {
    out.v = true;
    return out;
  }
  if (tok == "false") {
    out.v = false;
    return out;
  }
  if (parse_number(tok, out)) return out;
  throw ConfigError("config line " + std::to_string(line_no) + ": cannot parse value '" +
                    tok + "'");
}

TomlValue parse_array(const std::string& body, long line_no) {
  std::vector<std::string> toks;
  std::string cur;
  bool in_quote = false;
  for (const char c : body) {
    if (c == '"') in_quote = !in_quote;
    if (c == ',' && !in_quote) {
      toks.push_back(strip(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!strip(cur).empty()) toks.push_back(strip(cur));

  TomlValue out;
  if (toks.empty()) {
    out.v = std::vector<double>{};
    return out;
  }
  if (toks.front().size() >= 1 && toks.front().front() == '"') {
    std::vector<std::string> vals;
    for (const auto& t : toks) {
      const TomlValue v = parse_scalar(t, line_no);
      if (!v.is_string()) {
        throw ConfigError("config line " + std::to_string(line_no) + ": mixed array types");
      }
      vals.push_back(std::get<std::string>(v.v));
    }
    out.v = std::move(vals);
    return out;
  }
  std::vector<double> vals;
  for (const auto& t : toks) {
    const TomlValue v = parse_scalar(t, line_no);
    if (std::holds_alternative<long>(v.v)) {
      vals.push_back(static_cast<double>(std::get<long>(v.v)));
    } else if (std::holds_alternative<double>(v.v)) {
      vals.push_back(std::get<double>(v.v));
    } else {
      throw ConfigError("config line " + std::to_string(line_no) + ": mixed array types");
    }
  }
  out.v = std::move(vals);
  return out;
}

}  // namespace

TomlTable TomlTable::parse_string(const std::string& text) {
  TomlTable table;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  long line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = strip(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config line " + std::to_string(line_no) + ": unterminated table header");
      }
      section = strip(line.substr(1, line.size() - 2));
      if (section.empty()) {
        throw ConfigError("config line " + std::to_string(line_no) + ": empty table name");
      }
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = strip(line.substr(0, eq));
    const std::string val = strip(line.substr(eq + 1));
    if (key.empty() || val.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key or value");
    }
    const std::string full_key = section.empty() ? key : section + "." + key;
    TomlValue parsed;
    if (val.front() == '[') {
      if (val.back() != ']') {
        throw ConfigError("config line " + std::to_string(line_no) + ": unterminated array");
      }
      parsed = parse_array(val.substr(1, val.size() - 2), line_no);
    } else {
      parsed = parse_scalar(val, line_no);
    }
    if (table.values_.count(full_key)) {
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key " + full_key);
    }
    table.values_.emplace(full_key, std::move(parsed));
  }
  return table;
}

TomlTable TomlTable::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

const TomlValue* TomlTable::find(const std::string& key) const {
  const auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

std::string TomlTable::get_string(const std::string& key, const std::string& fallback) const {
  const TomlValue* v = find(key);
  if (!v) return fallback;
  if (!v->is_string()) throw ConfigError("config key " + key + ": expected string");
  return std::get<std::string>(v->v);
}

long TomlTable::get_long(const std::string& key, long fallback) const {
  const TomlValue* v = find(key);
  if (!v) return fallback;
  if (std::holds_alternative<long>(v->v)) return std::get<long>(v->v);
  if (std::holds_alternative<double>(v->v)) {
    const double d = std::get<double>(v->v);
    const long l = static_cast<long>(d);
    if (static_cast<double>(l) == d) return l;
  }
  throw ConfigError("config key " + key + ": expected integer");
}

double TomlTable::get_double(const std::string& key, double fallback) const {
  const TomlValue* v = find(key);
  if (!v) return fallback;
  if (std::holds_alternative<double>(v->v)) return std::get<double>(v->v);
  if (std::holds_alternative<long>(v->v)) return static_cast<double>(std::get<long>(v->v));
  throw ConfigError("config key " + key + ": expected number");
}

bool TomlTable::get_bool(const std::string& key, bool fallback) const {
  const TomlValue* v = find(key);
  if (!v) return fallback;
  if (!std::holds_alternative<bool>(v->v)) {
    throw ConfigError("config key " + key + ": expected true/false");
  }
  return std::get<bool>(v->v);
}

std::vector<double> TomlTable::get_double_array(const std::string& key) const {
  const TomlValue* v = find(key);
  if (!v) return {};
  if (std::holds_alternative<std::vector<double>>(v->v)) {
    return std::get<std::vector<double>>(v->v);
  }
  if (std::holds_alternative<double>(v->v)) return {std::get<double>(v->v)};
  if (std::holds_alternative<long>(v->v)) {
    return {static_cast<double>(std::get<long>(v->v))};
  }
  throw ConfigError("config key " + key + ": expected numeric array");
}

}  // namespace abmc::io
