#pragma once

// Minimal TOML reader: [section] headers, key = value with strings, integers,
// floats, booleans and single-line arrays. Enough for run configs.

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace allee {

struct config_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct TomlValue {
  enum class Type { String, Integer, Float, Bool, Array } type = Type::String;
  std::string text;  // string contents, or the literal as written
  std::vector<TomlValue> items;

  bool is_string() const { return type == Type::String; }
  // The literal as it would appear on a command line.
  const std::string& raw() const { return text; }
  double as_double() const {
    if (type != Type::Integer && type != Type::Float) throw config_error("expected a number, got '" + text + "'");
    return std::stod(text);
  }
  long long as_int() const {
    if (type != Type::Integer) throw config_error("expected an integer, got '" + text + "'");
    return std::stoll(text);
  }
  bool as_bool() const {
    if (type != Type::Bool) throw config_error("expected a boolean, got '" + text + "'");
    return text == "true";
  }
};

class Config {
 public:
  using Table = std::map<std::string, TomlValue>;

  static Config parse(std::istream& in, const std::string& origin = "<config>") {
    Config c;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto where = [&] { return origin + ":" + std::to_string(lineno) + ": "; };
      std::string s = trim(strip_comment(line));
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') throw config_error(where() + "unterminated section header");
        section = trim(s.substr(1, s.size() - 2));
        if (section.empty()) throw config_error(where() + "empty section name");
        c.tables_[section];
        continue;
      }
      auto eq = s.find('=');
      if (eq == std::string::npos) throw config_error(where() + "expected key = value");
      std::string key = trim(s.substr(0, eq));
      if (key.empty()) throw config_error(where() + "empty key");
      std::size_t pos = 0;
      std::string rest = trim(s.substr(eq + 1));
      TomlValue v = parse_value(rest, pos, where());
      if (!trim(rest.substr(pos)).empty()) throw config_error(where() + "trailing characters after value");
      auto& t = c.tables_[section];
      if (t.count(key)) throw config_error(where() + "duplicate key '" + key + "'");
      t[key] = v;
    }
    return c;
  }

  static Config load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw config_error("cannot open config file '" + path + "'");
    return parse(f, path);
  }

  std::optional<TomlValue> get(const std::string& section, const std::string& key) const {
    auto t = tables_.find(section);
    if (t == tables_.end()) return std::nullopt;
    auto v = t->second.find(key);
    if (v == t->second.end()) return std::nullopt;
    return v->second;
  }

  bool has_section(const std::string& s) const { return tables_.count(s) > 0; }
  const std::map<std::string, Table>& tables() const { return tables_; }

 private:
  static std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
  }

  static std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_str = !in_str;
      if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
  }

  static TomlValue parse_value(const std::string& s, std::size_t& pos, const std::string& where) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos >= s.size()) throw config_error(where + "missing value");
    TomlValue v;
    if (s[pos] == '"') {
      v.type = TomlValue::Type::String;
      ++pos;
      while (pos < s.size() && s[pos] != '"') {
        if (s[pos] == '\\' && pos + 1 < s.size()) {
          char e = s[++pos];
          v.text += e == 'n' ? '\n' : e == 't' ? '\t' : e;
        } else {
          v.text += s[pos];
        }
        ++pos;
      }
      if (pos >= s.size()) throw config_error(where + "unterminated string");
      ++pos;
      return v;
    }
    if (s[pos] == '[') {
      v.type = TomlValue::Type::Array;
      ++pos;
      for (;;) {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos >= s.size()) throw config_error(where + "unterminated array");
        if (s[pos] == ']') {
          ++pos;
          return v;
        }
        v.items.push_back(parse_value(s, pos, where));
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos < s.size() && s[pos] == ',') ++pos;
      }
    }
    std::size_t start = pos;
    while (pos < s.size() && s[pos] != ',' && s[pos] != ']' && !std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    v.text = s.substr(start, pos - start);
    if (v.text == "true" || v.text == "false") {
      v.type = TomlValue::Type::Bool;
    } else if (is_integer(v.text)) {
      v.type = TomlValue::Type::Integer;
    } else if (is_float(v.text)) {
      v.type = TomlValue::Type::Float;
    } else {
      throw config_error(where + "unsupported value '" + v.text + "' (quote rationals as \"p/q\")");
    }
    return v;
  }

  static bool is_integer(const std::string& t) {
    std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  }

  static bool is_float(const std::string& t) {
    try {
      std::size_t n = 0;
      std::stod(t, &n);
      return n == t.size();
    } catch (...) {
      return false;
    }
  }

  std::map<std::string, Table> tables_;
};

}  // namespace allee
