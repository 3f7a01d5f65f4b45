#pragma once

#include "allee/rational.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace allee {

// Truncated bivariate power series sum c_ij x^i y^j with i+j <= max_degree.
// Dense storage; the cutoff is tiny (21 terms at degree 5).
template <class T>
class Series2 {
 public:
  explicit Series2(int max_degree = 5) : n_(max_degree), c_(size_for(max_degree), T(0)) {
    if (max_degree < 0) throw std::invalid_argument("negative series cutoff");
  }

  static Series2 constant(const T& v, int n = 5) {
    Series2 s(n);
    s.c_[0] = v;
    return s;
  }
  static Series2 monomial(int i, int j, const T& v, int n = 5) {
    Series2 s(n);
    if (i + j <= n) s.c_[index(i, j)] = v;
    return s;
  }
  static Series2 x(int n = 5) { return monomial(1, 0, T(1), n); }
  static Series2 y(int n = 5) { return monomial(0, 1, T(1), n); }

  int max_degree() const { return n_; }

  T operator()(int i, int j) const {
    if (i < 0 || j < 0 || i + j > n_) return T(0);
    return c_[index(i, j)];
  }
  void set(int i, int j, const T& v) {
    if (i < 0 || j < 0 || i + j > n_) throw std::out_of_range("coefficient beyond series cutoff");
    c_[index(i, j)] = v;
  }
  void add_to(int i, int j, const T& v) {
    if (i + j <= n_) c_[index(i, j)] += v;
  }

  T constant_term() const { return c_[0]; }

  bool is_zero() const {
    for (const auto& v : c_)
      if (v != 0) return false;
    return true;
  }

  // Lowest total degree carrying a nonzero coefficient, -1 for the zero series.
  int order() const {
    for (int d = 0; d <= n_; ++d)
      for (int j = 0; j <= d; ++j)
        if (c_[index(d - j, j)] != 0) return d;
    return -1;
  }

  // Degree-d homogeneous part.
  Series2 homogeneous(int d) const {
    Series2 r(n_);
    if (d > n_) return r;
    for (int j = 0; j <= d; ++j) r.c_[index(d - j, j)] = c_[index(d - j, j)];
    return r;
  }

  Series2 truncated(int n) const {
    Series2 r(n);
    for (int d = 0; d <= std::min(n, n_); ++d)
      for (int j = 0; j <= d; ++j) r.c_[index(d - j, j)] = c_[index(d - j, j)];
    return r;
  }

  friend bool operator==(const Series2& a, const Series2& b) {
    int m = std::max(a.n_, b.n_);
    for (int d = 0; d <= m; ++d)
      for (int j = 0; j <= d; ++j)
        if (a(d - j, j) != b(d - j, j)) return false;
    return true;
  }

  Series2 operator-() const {
    Series2 r(*this);
    for (auto& v : r.c_) v = -v;
    return r;
  }
  Series2& operator+=(const Series2& b) {
    same_cutoff(b);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += b.c_[k];
    return *this;
  }
  Series2& operator-=(const Series2& b) {
    same_cutoff(b);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= b.c_[k];
    return *this;
  }
  Series2& operator*=(const T& s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  Series2& operator+=(const T& s) {
    c_[0] += s;
    return *this;
  }

  friend Series2 operator+(Series2 a, const Series2& b) { return a += b; }
  friend Series2 operator-(Series2 a, const Series2& b) { return a -= b; }
  friend Series2 operator*(Series2 a, const T& s) { return a *= s; }
  friend Series2 operator*(const T& s, Series2 a) { return a *= s; }
  friend Series2 operator+(Series2 a, const T& s) { return a += s; }
  friend Series2 operator+(const T& s, Series2 a) { return a += s; }
  friend Series2 operator-(Series2 a, const T& s) { return a += T(-s); }
  friend Series2 operator-(const T& s, const Series2& a) { return (-a) += s; }

  friend Series2 operator*(const Series2& a, const Series2& b) {
    a.same_cutoff(b);
    const int n = a.n_;
    Series2 r(n);
    for (int d1 = 0; d1 <= n; ++d1)
      for (int j1 = 0; j1 <= d1; ++j1) {
        const T& u = a.c_[index(d1 - j1, j1)];
        if (u == 0) continue;
        for (int d2 = 0; d1 + d2 <= n; ++d2)
          for (int j2 = 0; j2 <= d2; ++j2) {
            const T& w = b.c_[index(d2 - j2, j2)];
            if (w == 0) continue;
            r.c_[index(d1 - j1 + d2 - j2, j1 + j2)] += u * w;
          }
      }
    return r;
  }
  Series2& operator*=(const Series2& b) { return *this = *this * b; }

  Series2 pow(int k) const {
    if (k < 0) return recip().pow(-k);
    Series2 r = constant(T(1), n_), p = *this;
    while (k) {
      if (k & 1) r *= p;
      k >>= 1;
      if (k) p *= p;
    }
    return r;
  }

  Series2 dx() const {
    Series2 r(n_);
    for (int d = 1; d <= n_; ++d)
      for (int j = 0; j < d; ++j) {
        int i = d - j;
        r.c_[index(i - 1, j)] = c_[index(i, j)] * T(i);
      }
    return r;
  }
  Series2 dy() const {
    Series2 r(n_);
    for (int d = 1; d <= n_; ++d)
      for (int j = 1; j <= d; ++j) r.c_[index(d - j, j - 1)] = c_[index(d - j, j)] * T(j);
    return r;
  }

  // Multiplicative inverse; needs a nonzero constant term.
  Series2 recip() const {
    T c0 = c_[0];
    if (c0 == 0) throw std::domain_error("series reciprocal needs a nonzero constant term");
    T inv = T(1) / c0;
    Series2 t = *this * inv;
    t.c_[0] = T(0);
    Series2 r = constant(T(1), n_), p = constant(T(1), n_);
    for (int k = 1; k <= n_; ++k) {
      p = p * (-t);
      r += p;
    }
    return r * inv;
  }

  template <class F>
  void for_each(F&& f) const {
    for (int d = 0; d <= n_; ++d)
      for (int j = 0; j <= d; ++j) {
        const T& v = c_[index(d - j, j)];
        if (v != 0) f(d - j, j, v);
      }
  }

  template <class U, class F>
  Series2<U> map(F&& f) const {
    Series2<U> r(n_);
    for_each([&](int i, int j, const T& v) { r.set(i, j, f(v)); });
    return r;
  }

 private:
  static std::size_t size_for(int n) { return static_cast<std::size_t>((n + 1) * (n + 2) / 2); }
  static std::size_t index(int i, int j) {
    int d = i + j;
    return static_cast<std::size_t>(d * (d + 1) / 2 + j);
  }
  void same_cutoff(const Series2& b) const {
    if (b.n_ != n_) throw std::invalid_argument("series cutoffs differ");
  }

  int n_;
  std::vector<T> c_;
};

// Composition s(x_sub, y_sub). Substitutions with a constant term are
// refused unless translation is requested; s is then treated as the exact
// polynomial it stores, which keeps every retained coefficient exact.
template <class T>
Series2<T> subst(const Series2<T>& s, const Series2<T>& x_sub, const Series2<T>& y_sub,
                 bool translation = false) {
  const int n = s.max_degree();
  if (x_sub.max_degree() != n || y_sub.max_degree() != n)
    throw std::invalid_argument("series cutoffs differ");
  if (!translation && (x_sub.constant_term() != 0 || y_sub.constant_term() != 0))
    throw std::domain_error("substitution has a constant term; translation mode not enabled");
  std::vector<Series2<T>> xp{Series2<T>::constant(T(1), n)}, yp{Series2<T>::constant(T(1), n)};
  Series2<T> r(n);
  s.for_each([&](int i, int j, const T& v) {
    while (static_cast<int>(xp.size()) <= i) xp.push_back(xp.back() * x_sub);
    while (static_cast<int>(yp.size()) <= j) yp.push_back(yp.back() * y_sub);
    r += (xp[i] * yp[j]) * v;
  });
  return r;
}

template <class T>
struct Field2 {
  Series2<T> f, g;
};

// Vector field (f,g) pulled back through (x,y) = Phi(X,Y): (DPhi)^-1 (f,g)(Phi).
template <class T>
Field2<T> vf_transform(const Series2<T>& f, const Series2<T>& g, const Series2<T>& x_sub,
                       const Series2<T>& y_sub, bool translation = false) {
  Series2<T> fs = subst(f, x_sub, y_sub, translation);
  Series2<T> gs = subst(g, x_sub, y_sub, translation);
  Series2<T> a = x_sub.dx(), b = x_sub.dy(), c = y_sub.dx(), d = y_sub.dy();
  Series2<T> det = a * d - b * c;
  if (det.constant_term() == 0) throw std::domain_error("substitution has a non-invertible linear part");
  Series2<T> idet = det.recip();
  return {(d * fs - b * gs) * idet, (a * gs - c * fs) * idet};
}

// Time reparametrization dt = factor dtau.
template <class T>
Field2<T> time_rescale(const Series2<T>& f, const Series2<T>& g, const Series2<T>& factor) {
  if (factor.constant_term() == 0) throw std::domain_error("time factor vanishes at the origin");
  return {f * factor, g * factor};
}

inline nlohmann::json to_json(const Series2<Rational>& s) {
  nlohmann::json terms = nlohmann::json::array();
  s.for_each([&](int i, int j, const Rational& v) { terms.push_back({i, j, str(v)}); });
  return {{"max_degree", s.max_degree()}, {"terms", terms}};
}

inline Series2<Rational> series_from_json(const nlohmann::json& j) {
  Series2<Rational> s(j.at("max_degree").get<int>());
  for (const auto& t : j.at("terms"))
    s.set(t.at(0).get<int>(), t.at(1).get<int>(), parse_rational(t.at(2).get<std::string>()));
  return s;
}

}  // namespace allee
