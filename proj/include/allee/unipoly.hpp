#pragma once

#include "allee/rational.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace allee {

// Dense univariate polynomial, ascending coefficients. Trailing zeros are
// stripped so the leading coefficient is nonzero unless the polynomial is 0.
template <class T>
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<T> coeffs, std::string var = "x") : c_(std::move(coeffs)), var_(std::move(var)) {
    trim();
  }
  static UniPoly constant(const T& v, std::string var = "x") { return UniPoly(std::vector<T>{v}, std::move(var)); }
  static UniPoly monomial(int k, const T& v, std::string var = "x") {
    std::vector<T> c(static_cast<std::size_t>(k) + 1, T(0));
    c.back() = v;
    return UniPoly(std::move(c), std::move(var));
  }

  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<T>& coeffs() const { return c_; }
  const std::string& variable() const { return var_; }
  T operator[](int k) const { return k >= 0 && k <= degree() ? c_[k] : T(0); }
  T leading() const { return c_.empty() ? T(0) : c_.back(); }

  T operator()(const T& x) const {
    T r(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
  }

  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    std::vector<T> r(std::max(a.c_.size(), b.c_.size()), T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return UniPoly(std::move(r), a.var_);
  }
  UniPoly operator-() const {
    UniPoly r(*this);
    for (auto& v : r.c_) v = -v;
    return r;
  }
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b) { return a + (-b); }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return UniPoly({}, a.var_);
    std::vector<T> r(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return UniPoly(std::move(r), a.var_);
  }
  friend UniPoly operator*(const T& s, const UniPoly& a) {
    UniPoly r(a);
    for (auto& v : r.c_) v *= s;
    r.trim();
    return r;
  }

  // Euclidean division over a field: a = q*b + r, deg r < deg b.
  friend std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<T> r = a.c_;
    int db = b.degree();
    int dq = a.degree() - db;
    std::vector<T> q(dq >= 0 ? static_cast<std::size_t>(dq) + 1 : 0, T(0));
    for (int k = dq; k >= 0; --k) {
      T coef = r[k + db] / b.c_.back();
      q[k] = coef;
      for (int i = 0; i <= db; ++i) r[k + i] -= coef * b.c_[i];
      r[k + db] = T(0);
    }
    return {UniPoly(std::move(q), a.var_), UniPoly(std::move(r), a.var_)};
  }

  UniPoly monic() const {
    if (is_zero()) return *this;
    return (T(1) / leading()) * *this;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
      if (c_[k] == 0) continue;
      if (!first) os << " + ";
      first = false;
      os << "(" << c_[k] << ")";
      if (k >= 1) os << "*" << var_;
      if (k >= 2) os << "^" << k;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<T> c_;
  std::string var_ = "x";
};

// Monic gcd; exact coefficient fields only.
template <class T>
UniPoly<T> gcd(UniPoly<T> a, UniPoly<T> b) {
  static_assert(is_exact_v<T>, "polynomial gcd needs exact coefficients");
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

// Newton divided differences through the points (xs[i], ys[i]).
template <class T>
UniPoly<T> interpolate(const std::vector<T>& xs, const std::vector<T>& ys, const std::string& var = "x") {
  if (xs.size() != ys.size() || xs.empty()) throw std::invalid_argument("interpolation needs matching nonempty samples");
  const std::size_t n = xs.size();
  std::vector<T> dd = ys;
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = n - 1; i >= j; --i) {
      T den = xs[i] - xs[i - j];
      if (den == 0) throw std::invalid_argument("repeated interpolation node");
      dd[i] = (dd[i] - dd[i - 1]) / den;
      if (i == j) break;
    }
  UniPoly<T> p = UniPoly<T>::constant(dd[n - 1], var);
  for (std::size_t k = n - 1; k-- > 0;) {
    p = p * UniPoly<T>(std::vector<T>{T(-xs[k]), T(1)}, var);
    p = p + UniPoly<T>::constant(dd[k], var);
  }
  return p;
}

template <class T>
T pow_int(const T& b, int k) {
  T r(1);
  for (int i = 0; i < k; ++i) r *= b;
  return r;
}

// Determinant: Bareiss fraction-free elimination for exact types, partial
// pivoting for floats.
template <class T>
T determinant(std::vector<std::vector<T>> m) {
  const std::size_t n = m.size();
  if (n == 0) return T(1);
  int sgn = 1;
  if constexpr (is_exact_v<T>) {
    T prev(1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (m[k][k] == 0) {
        std::size_t p = k + 1;
        while (p < n && m[p][k] == 0) ++p;
        if (p == n) return T(0);
        std::swap(m[k], m[p]);
        sgn = -sgn;
      }
      for (std::size_t i = k + 1; i < n; ++i)
        for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      prev = m[k][k];
    }
    return sgn > 0 ? m[n - 1][n - 1] : T(-m[n - 1][n - 1]);
  } else {
    T det(1);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i < n; ++i)
        if (abs_of(m[i][k]) > abs_of(m[p][k])) p = i;
      if (m[p][k] == 0) return T(0);
      if (p != k) {
        std::swap(m[k], m[p]);
        sgn = -sgn;
      }
      det *= m[k][k];
      for (std::size_t i = k + 1; i < n; ++i) {
        T f = m[i][k] / m[k][k];
        for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
      }
    }
    return sgn > 0 ? det : T(-det);
  }
}

template <class T>
std::vector<std::vector<T>> sylvester_matrix(const UniPoly<T>& f, const UniPoly<T>& g) {
  const int m = f.degree(), n = g.degree();
  const std::size_t N = static_cast<std::size_t>(m + n);
  std::vector<std::vector<T>> s(N, std::vector<T>(N, T(0)));
  // Rows hold descending coefficients, shifted.
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k) s[r][r + k] = f[m - k];
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k) s[n + r][r + k] = g[n - k];
  return s;
}

template <class T>
T resultant(const UniPoly<T>& f, const UniPoly<T>& g) {
  if (f.is_zero() || g.is_zero()) throw std::domain_error("resultant of a zero polynomial");
  if (f.degree() == 0 && g.degree() == 0) throw std::domain_error("resultant of two constants");
  if (f.degree() == 0) return pow_int(f[0], g.degree());
  if (g.degree() == 0) return pow_int(g[0], f.degree());
  return determinant(sylvester_matrix(f, g));
}

// Max-abs coefficient norm, used to scale numeric resultant floors.
template <class T>
T coeff_norm(const UniPoly<T>& p) {
  T m(0);
  for (const auto& v : p.coeffs())
    if (abs_of(v) > m) m = abs_of(v);
  return m;
}

}  // namespace allee
