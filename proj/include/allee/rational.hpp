#pragma once

#include <gmpxx.h>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace allee {

// Exact rationals are GMP's mpq_class: always canonical after our constructors.
using Rational = mpq_class;
using Integer = mpz_class;

// 113-bit and 237-bit mantissa binary floats.
using quad = boost::multiprecision::cpp_bin_float_quad;
using oct = boost::multiprecision::cpp_bin_float_oct;

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

// Strict "p/q" or "p" parser. Decimals, exponents and blanks are rejected.
inline Rational parse_rational(std::string_view s) {
  auto digits = [](std::string_view t) {
    if (t.empty()) return false;
    for (char c : t)
      if (c < '0' || c > '9') return false;
    return true;
  };
  std::string_view body = s;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) body.remove_prefix(1);
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!digits(num) || !digits(den))
    throw std::invalid_argument("malformed rational '" + std::string(s) + "' (expected p/q)");
  Integer n(std::string(num), 10), d(std::string(den), 10);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
  if (s[0] == '-') n = -n;
  Rational q(n, d);
  q.canonicalize();
  return q;
}

// n/d in canonical form; mpq_class(n, d) alone does not reduce.
inline Rational ratio(long n, long d) {
  if (d == 0) throw std::domain_error("zero denominator");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

inline std::string str(const Rational& q) { return q.get_str(); }

inline Rational pow(const Rational& q, int k) {
  if (k < 0) {
    if (q == 0) throw std::domain_error("zero to negative power");
    return pow(Rational(1) / q, -k);
  }
  Rational r(1);
  for (int i = 0; i < k; ++i) r *= q;
  return r;
}

inline int sign(const Rational& q) { return sgn(q); }

// Exact square root when q is the square of a rational.
inline bool exact_sqrt(const Rational& q, Rational& root) {
  if (q < 0) return false;
  const Integer& n = q.get_num();
  const Integer& d = q.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
  Integer rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  root = Rational(rn, rd);
  root.canonicalize();
  return true;
}

// Conversions between the scalar kinds used across the library.
// mpq get_d truncates; go through oct so the result is the nearest double.
inline double nearest_double(const Rational& q) {
  if (q.get_den() == 1 && abs(q.get_num()) < (mpz_class(1) << 53)) return q.get_d();
  oct v = oct(q.get_num().get_str()) / oct(q.get_den().get_str());
  return static_cast<double>(v);
}

template <class T>
T from_rational(const Rational& q) {
  if constexpr (is_exact_v<T>) {
    return q;
  } else if constexpr (std::is_floating_point_v<T>) {
    return static_cast<T>(nearest_double(q));
  } else {
    return T(q.get_num().get_str()) / T(q.get_den().get_str());
  }
}

template <class T>
double to_double(const T& v) {
  if constexpr (is_exact_v<T>) {
    return nearest_double(v);
  } else {
    return static_cast<double>(v);
  }
}

template <class T>
T sqrt_of(const T& v) {
  using std::sqrt;
  using boost::multiprecision::sqrt;
  if constexpr (is_exact_v<T>) {
    Rational r;
    if (!exact_sqrt(v, r)) throw std::domain_error("square root is not rational: " + str(v));
    return r;
  } else {
    return sqrt(v);
  }
}

template <class T>
T abs_of(const T& v) {
  return v < 0 ? T(-v) : v;
}

}  // namespace allee
