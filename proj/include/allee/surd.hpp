#pragma once

#include "allee/rational.hpp"

#include <stdexcept>
#include <string>

namespace allee {

// a + b*sqrt(d) with rational a, b and a fixed nonnegative rational radicand d.
// Closed under + - * / for a common radicand; the sign is decided exactly.
class QSurd {
 public:
  QSurd() = default;
  QSurd(Rational a) : a_(std::move(a)) {}  // NOLINT: implicit lift of rationals
  QSurd(Rational a, Rational b, Rational d) : a_(std::move(a)), b_(std::move(b)), d_(std::move(d)) {
    if (d_ < 0) throw std::domain_error("negative radicand");
    Rational r;
    if (exact_sqrt(d_, r)) {
      a_ += b_ * r;
      b_ = 0;
      d_ = 0;
    }
    if (b_ == 0) d_ = 0;
    else reduce();
  }

  const Rational& rational_part() const { return a_; }
  const Rational& surd_coeff() const { return b_; }
  const Rational& radicand() const { return d_; }
  bool is_rational() const { return b_ == 0; }

  int sign() const {
    int sa = sgn(a_), sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    // opposite signs: compare a^2 with b^2 d
    Rational lhs = a_ * a_, rhs = b_ * b_ * d_;
    if (lhs == rhs) return 0;
    return lhs > rhs ? sa : sb;
  }
  bool is_zero() const { return sign() == 0; }

  friend QSurd operator+(const QSurd& x, const QSurd& y) {
    Rational d = common(x, y);
    return QSurd(x.a_ + y.a_, x.b_ + y.b_, d);
  }
  QSurd operator-() const { return QSurd(-a_, -b_, d_); }
  friend QSurd operator-(const QSurd& x, const QSurd& y) { return x + (-y); }
  friend QSurd operator*(const QSurd& x, const QSurd& y) {
    Rational d = common(x, y);
    return QSurd(x.a_ * y.a_ + x.b_ * y.b_ * d, x.a_ * y.b_ + x.b_ * y.a_, d);
  }
  friend QSurd operator/(const QSurd& x, const QSurd& y) {
    Rational d = common(x, y);
    Rational n = y.a_ * y.a_ - y.b_ * y.b_ * d;
    if (n == 0) throw std::domain_error("division by zero surd");
    QSurd conj(y.a_ / n, -y.b_ / n, d);
    return x * conj;
  }

  template <class F>
  F to() const {
    return from_rational<F>(a_) + from_rational<F>(b_) * sqrt_float<F>(d_);
  }
  double to_double() const { return to<double>(); }

  std::string str() const {
    if (b_ == 0) return a_.get_str();
    return a_.get_str() + (b_ < 0 ? " - " : " + ") + Rational(abs(b_)).get_str() + "*sqrt(" + d_.get_str() + ")";
  }

 private:
  // sqrt(p/q) = sqrt(p q)/q, then pull small square factors out of p q.
  void reduce() {
    Integer q = d_.get_den(), n = d_.get_num() * q;
    b_ /= Rational(q);
    for (unsigned long f = 2; f <= 1000; ++f) {
      Integer sq = Integer(f) * f;
      if (sq > n) break;
      while (mpz_divisible_ui_p(n.get_mpz_t(), f * f)) {
        n /= sq;
        b_ *= f;
      }
    }
    d_ = Rational(n);
  }

  template <class F>
  static F sqrt_float(const Rational& d) {
    using std::sqrt;
    using boost::multiprecision::sqrt;
    return sqrt(from_rational<F>(d));
  }
  static Rational common(const QSurd& x, const QSurd& y) {
    if (x.b_ != 0 && y.b_ != 0 && x.d_ != y.d_) throw std::domain_error("surds with different radicands");
    return x.b_ != 0 ? x.d_ : y.d_;
  }

  Rational a_{0}, b_{0}, d_{0};
};

// c*sqrt(r) with rational c and r >= 0. Used for M and N, whose radicands
// differ between the closed form and the transformation chain.
struct ScaledRoot {
  Rational coef;
  Rational radicand;

  int sign() const { return radicand == 0 ? 0 : sgn(coef); }
  bool is_zero() const { return sign() == 0; }
  double to_double() const { return coef.get_d() * std::sqrt(radicand.get_d()); }
  std::string str() const {
    if (is_zero()) return "0";
    return coef.get_str() + "*sqrt(" + radicand.get_str() + ")";
  }
  // Exact equality of the real numbers c1*sqrt(r1) and c2*sqrt(r2).
  friend bool operator==(const ScaledRoot& x, const ScaledRoot& y) {
    if (x.sign() != y.sign()) return false;
    return x.coef * x.coef * x.radicand == y.coef * y.coef * y.radicand;
  }
};

}  // namespace allee
