#pragma once

// Option plumbing for the command-line front end: values come from flags
// first, then the config file, then defaults.

#include "allee/config.hpp"
#include "allee/model.hpp"
#include "allee/rational.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace allee::cli {

struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Decimal or scientific literal converted exactly, e.g. "0.1" -> 1/10.
inline Rational parse_decimal_exact(const std::string& s) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
  std::string digits;
  int frac = 0;
  bool dot = false, any = false;
  for (; i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'); ++i) {
    if (s[i] == '.') {
      if (dot) throw usage_error("malformed number '" + s + "'");
      dot = true;
    } else {
      digits += s[i];
      any = true;
      if (dot) ++frac;
    }
  }
  if (!any) throw usage_error("malformed number '" + s + "'");
  long exp10 = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    std::string e = s.substr(i + 1);
    std::size_t n = 0;
    try {
      exp10 = std::stol(e, &n);
    } catch (...) {
      throw usage_error("malformed exponent in '" + s + "'");
    }
    if (n != e.size()) throw usage_error("malformed exponent in '" + s + "'");
    i = s.size();
  }
  if (i != s.size()) throw usage_error("malformed number '" + s + "'");
  Rational q{Integer(digits, 10)};
  long shift = exp10 - frac;
  Rational ten(10);
  q *= pow(ten, static_cast<int>(shift));
  return neg ? Rational(-q) : q;
}

// Exact mode accepts only "p/q" or integers.
inline Rational parse_exact(const std::string& what, const std::string& s) {
  try {
    return parse_rational(s);
  } catch (const std::invalid_argument&) {
    throw usage_error(what + ": '" + s + "' is not a rational p/q (decimals are rejected in exact mode)");
  }
}

inline Rational parse_lenient(const std::string& what, const std::string& s) {
  try {
    return parse_rational(s);
  } catch (const std::invalid_argument&) {
  }
  try {
    return parse_decimal_exact(s);
  } catch (const std::invalid_argument&) {
    throw usage_error(what + ": '" + s + "' is not a number");
  }
}

// Looks up a value: explicit flag, then config [section] key.
class Resolver {
 public:
  explicit Resolver(const std::optional<Config>& cfg) : cfg_(cfg) {}

  std::optional<std::string> text(const std::string& section, const std::string& key,
                                  const std::optional<std::string>& flag, bool exact) const {
    if (flag) return flag;
    if (!cfg_) return std::nullopt;
    auto v = cfg_->get(section, key);
    if (!v) return std::nullopt;
    if (v->type == TomlValue::Type::Float && exact)
      throw usage_error("config [" + section + "] " + key + " = " + v->raw() +
                        ": decimals are rejected in exact mode, quote as \"p/q\"");
    if (v->type == TomlValue::Type::Array || v->type == TomlValue::Type::Bool)
      throw usage_error("config [" + section + "] " + key + ": expected a number");
    return v->raw();
  }

  std::optional<Rational> rational(const std::string& section, const std::string& key,
                                   const std::optional<std::string>& flag, bool exact) const {
    auto t = text(section, key, flag, exact);
    if (!t) return std::nullopt;
    return exact ? parse_exact(key, *t) : parse_lenient(key, *t);
  }

  double number(const std::string& section, const std::string& key, const std::optional<double>& flag,
                double fallback) const {
    if (flag) return *flag;
    if (cfg_)
      if (auto v = cfg_->get(section, key)) return v->as_double();
    return fallback;
  }

  long long integer(const std::string& section, const std::string& key, const std::optional<long long>& flag,
                    long long fallback) const {
    if (flag) return *flag;
    if (cfg_)
      if (auto v = cfg_->get(section, key)) return v->as_int();
    return fallback;
  }

  std::string string(const std::string& section, const std::string& key, const std::optional<std::string>& flag,
                     const std::string& fallback) const {
    if (flag) return *flag;
    if (cfg_)
      if (auto v = cfg_->get(section, key)) return v->raw();
    return fallback;
  }

  bool boolean(const std::string& section, const std::string& key, bool flag_set, bool fallback) const {
    if (flag_set) return true;
    if (cfg_)
      if (auto v = cfg_->get(section, key)) return v->as_bool();
    return fallback;
  }

  std::optional<TomlValue> raw(const std::string& section, const std::string& key) const {
    if (!cfg_) return std::nullopt;
    return cfg_->get(section, key);
  }

 private:
  const std::optional<Config>& cfg_;
};

// Splits "a,b,c" into numbers.
inline std::vector<double> split_numbers(const std::string& s, std::size_t expect, const std::string& what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find(',', start);
    std::string tok = s.substr(start, end == std::string::npos ? std::string::npos : end - start);
    try {
      out.push_back(nearest_double(parse_lenient(what, tok)));
    } catch (const usage_error&) {
      throw usage_error(what + ": malformed list '" + s + "'");
    }
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (expect && out.size() != expect)
    throw usage_error(what + ": expected " + std::to_string(expect) + " comma-separated values");
  return out;
}

}  // namespace allee::cli
