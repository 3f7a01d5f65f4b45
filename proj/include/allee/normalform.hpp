#pragma once

#include "allee/equilibria.hpp"
#include "allee/model.hpp"
#include "allee/rational.hpp"
#include "allee/series2.hpp"
#include "allee/unipoly.hpp"
#include "allee/surd.hpp"

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace allee {

// Thrown when a chain normalization would divide by zero; names the step.
struct chain_error : std::domain_error {
  using std::domain_error::domain_error;
};

struct CuspLocus {
  Rational gamma, eta, alpha0, beta0, delta0, eta0;
  Params<Rational> params() const { return {alpha0, beta0, gamma, delta0, eta}; }
};

inline Rational eta0_of(const Rational& g) {
  return (g * g + 8 * g + 8) / (4 * g * g * g + 19 * g * g + 20 * g + 4);
}

inline CuspLocus cusp_locus(const Rational& g, const Rational& e) {
  if (g <= 0) throw std::domain_error("gamma must be positive");
  if (e <= 0) throw std::domain_error("eta must be positive");
  if (g * e >= 1) throw std::domain_error("cusp locus needs gamma*eta < 1");
  Rational one_m = 1 - g * e;
  CuspLocus c;
  c.gamma = g;
  c.eta = e;
  c.alpha0 = (2 + g) * one_m / ((1 + g) * (2 + 3 * g));
  c.beta0 = 4 * (1 + g) * one_m * one_m / ((2 + 3 * g) * (2 + 3 * g));
  c.delta0 = g * g * one_m / (3 * g * g + 5 * g + 2);
  c.eta0 = eta0_of(g);
  return c;
}

// The equilibrium where the trace and the discriminant of the equilibrium
// quadratic both vanish; returns its abscissa or throws.
inline Rational require_nilpotent(const Params<Rational>& p) {
  p.validate();
  const Rational& a = p.alpha;
  const Rational& g = p.gamma;
  const Rational& e = p.eta;
  Rational W = 1 - a - a * g - g * e;
  Rational D = 1 + a + a * g - g * e;
  if (D == 0) throw std::domain_error("1+alpha+alpha*gamma-gamma*eta vanishes");
  if (delta2(p) != 0) throw std::domain_error("not a nilpotent point: Delta2 != 0");
  Rational x0 = W / (2 * (1 + g));
  if (x0 <= 0) throw std::domain_error("not a nilpotent point: double equilibrium is not positive");
  auto J = jacobian<Rational>(p, {x0, x0 + e});
  if (trace(J) != 0) throw std::domain_error("not a nilpotent point: trace != 0");
  return x0;
}

// Nilpotent point with free (alpha, gamma, eta): beta from Delta2 = 0 and
// delta from a vanishing trace at the double equilibrium.
inline Params<Rational> nilpotent_point(const Rational& a, const Rational& g, const Rational& e) {
  if (a <= 0 || g <= 0 || e <= 0) throw std::domain_error("alpha, gamma, eta must be positive");
  Rational A = 1 + g, B = g * (a + e) + a - 1;
  Rational b = B * B / (4 * A) - a * (g * e - 1);
  Rational x0 = -B / (2 * A);
  if (x0 <= 0) throw std::domain_error("double equilibrium is not positive");
  if (b <= 0) throw std::domain_error("beta would be non-positive");
  Rational y0 = x0 + e, xa = x0 + a;
  Rational dl = 1 - 2 * x0 - g * y0 - b * a / (xa * xa);
  if (dl <= 0) throw std::domain_error("delta would be non-positive");
  return {a, b, g, dl, e};
}

struct CuspReport {
  Rational d20, d11;
  std::optional<ScaledRoot> M, N;
  std::optional<Rational> rho1, rho2;
  int codim = 0;  // 2, 3, 4; 0 means ">4 or invalid"

  std::string codim_tag() const { return codim ? std::to_string(codim) : std::string(">4 or invalid"); }
};

inline int codim_from(const CuspReport& r) {
  if (r.d20 == 0) return 0;
  if (r.d11 != 0) return 2;
  if (!r.M) return 0;
  if (!r.M->is_zero()) return 3;
  if (r.N && !r.N->is_zero()) return 4;
  return 0;
}

inline Rational rho1_of(const Rational& g, const Rational& e) {
  return 4 * e * g * g * g + (19 * e - 1) * g * g + (20 * e - 8) * g + 4 * (e - 2);
}

// Constant term of the gamma^1 coefficient reads -48 here; see the notes.
inline Rational rho2_of(const Rational& g, const Rational& e) {
  Rational g2 = g * g, g3 = g2 * g, g4 = g3 * g, g5 = g4 * g, g6 = g5 * g, e2 = e * e;
  return 24 * e2 * g6 + (102 * e2 - 18 * e) * g5 + (71 * e2 - 118 * e + 3) * g4 - (156 * e2 + 158 * e - 46) * g3 -
         (248 * e2 - 8 * e - 88) * g2 - (112 * e2 - 104 * e - 48) * g + 16 * e * (2 - e);
}

inline CuspReport cusp_report_closed(const Params<Rational>& p) {
  require_nilpotent(p);
  const Rational& a = p.alpha;
  const Rational& g = p.gamma;
  const Rational& e = p.eta;
  Rational W = 1 - a - a * g - g * e;
  Rational D = 1 + a + a * g - g * e;
  CuspReport r;
  r.d20 = -g * W * W / (2 * D);
  r.d11 = (a * (1 + g) * (2 + 3 * g) - (2 + g) * (1 - g * e)) / D;
  if (r.d11 == 0) {
    Rational one_m = 1 - g * e;
    Rational rho = g * one_m / (6 * g * g + 10 * g + 4);
    Rational q = (2 + g) * (1 + 2 * g) * e + g;
    Rational r1 = rho1_of(g, e), r2 = rho2_of(g, e);
    Rational s = 2 + 3 * g;
    Rational Mc = -(1 + g) * s * s * s / (4 * g * g * one_m * one_m * one_m * q) * r1;
    Rational Nc = -(1 + g) * s * s * s * s / (32 * g * g * g * pow(one_m, 4) * q * q) * r2;
    r.rho1 = r1;
    r.rho2 = r2;
    r.M = ScaledRoot{Mc, rho};
    r.N = ScaledRoot{Nc, rho};
  }
  r.codim = codim_from(r);
  return r;
}

namespace detail {

template <class T>
Field2<T> run_step(const char* name, const Field2<T>& fg, const Series2<T>& xs, const Series2<T>& ys) {
  try {
    return vf_transform(fg.f, fg.g, xs, ys);
  } catch (const std::domain_error& ex) {
    throw chain_error(std::string("step ") + name + ": " + ex.what());
  }
}

template <class T>
T nonzero(const char* name, const T& v) {
  if (v == 0) throw chain_error(std::string("step ") + name + ": normalizing coefficient vanishes");
  return v;
}

}

// Intermediate stages of the exact cusp chain, exposed for regression tests.
struct CuspChainTrace {
  Field2<Rational> linear;   // after translation and the linear normalization
  Field2<Rational> quad;     // after the quadratic near-identity change
  Field2<Rational> final_form;
  Rational w20, w31, w41;
};

inline CuspReport cusp_report_chain(const Params<Rational>& p, CuspChainTrace* trace_out = nullptr) {
  using S = Series2<Rational>;
  Rational x0 = require_nilpotent(p);
  const Rational& a = p.alpha;
  const Rational& b = p.beta;
  const Rational& g = p.gamma;
  const Rational& dl = p.delta;
  const Rational& e = p.eta;
  Rational y0 = x0 + e;
  const S X = S::x(), Y = S::y();

  // Local expansion of the field at E*.
  S x = X + x0, y = Y + y0;
  Field2<Rational> fg;
  fg.f = x * (1 - x) - g * x * y - b * x * (x + a).recip();
  fg.g = dl * y * (1 - y * (x + e).recip());
  if (fg.f.constant_term() != 0 || fg.g.constant_term() != 0) throw chain_error("translation: E* is not an equilibrium");

  Rational W = 1 - a - a * g - g * e;
  Rational k = 2 * (1 + g) / (g * detail::nonzero("linear", W));
  fg = detail::run_step("linear", fg, X + k * Y, X);
  if (fg.f(1, 0) != 0 || fg.f(0, 1) != 1 || fg.g(1, 0) != 0 || fg.g(0, 1) != 0)
    throw chain_error("step linear: linear part is not the nilpotent block");
  if (trace_out) trace_out->linear = fg;

  CuspReport r;
  {
    Rational a02 = fg.f(0, 2), b02 = fg.g(0, 2);
    fg = detail::run_step("quadratic", fg, X + b02 / 2 * X * X + a02 * X * Y, Y + b02 * X * Y);
  }
  if (trace_out) trace_out->quad = fg;
  r.d20 = fg.g(2, 0);
  r.d11 = fg.g(1, 1);
  if (r.d11 != 0 || r.d20 == 0) {
    r.codim = codim_from(r);
    return r;
  }

  {  // cubic terms
    auto c = [&](int i, int j) { return fg.f(i, j); };
    auto d = [&](int i, int j) { return fg.g(i, j); };
    S xs = X + (2 * c(2, 1) + d(1, 2)) / 6 * X.pow(3) + (c(1, 2) + d(0, 3)) / 2 * X * X * Y + c(0, 3) * X * Y * Y;
    S ys = Y - c(3, 0) * X.pow(3) + d(1, 2) / 2 * X * X * Y + d(0, 3) * X * Y * Y;
    fg = detail::run_step("cubic", fg, xs, ys);
  }
  {  // quartic terms
    auto e_ = [&](int i, int j) { return fg.f(i, j); };
    auto h = [&](int i, int j) { return fg.g(i, j); };
    S xs = X + (3 * e_(3, 1) + h(2, 2)) / 12 * X.pow(4) + (2 * e_(2, 2) + h(1, 3)) / 6 * X.pow(3) * Y +
           (e_(1, 3) + h(0, 4)) / 2 * X * X * Y * Y + e_(0, 4) * X * Y.pow(3);
    S ys = Y - e_(4, 0) * X.pow(4) + h(2, 2) / 3 * X.pow(3) * Y + h(1, 3) / 2 * X * X * Y * Y + h(0, 4) * X * Y.pow(3);
    fg = detail::run_step("quartic", fg, xs, ys);
  }
  {  // quintic terms
    auto k_ = [&](int i, int j) { return fg.f(i, j); };
    auto l = [&](int i, int j) { return fg.g(i, j); };
    S xs = X + (4 * k_(4, 1) + l(3, 2)) / 20 * X.pow(5) + (3 * k_(3, 2) + l(2, 3)) / 12 * X.pow(4) * Y +
           (2 * k_(2, 3) + l(1, 4)) / 6 * X.pow(3) * Y * Y + (k_(1, 4) + l(0, 5)) / 2 * X * X * Y.pow(3) +
           k_(0, 5) * X * Y.pow(4);
    S ys = Y - k_(5, 0) * X.pow(5) + l(3, 2) / 4 * X.pow(4) * Y + l(2, 3) / 3 * X.pow(3) * Y * Y +
           l(1, 4) / 2 * X * X * Y.pow(3) + l(0, 5) * X * Y.pow(4);
    fg = detail::run_step("quintic", fg, xs, ys);
  }
  {  // remove x^2 y
    Rational m20 = detail::nonzero("step 1", fg.g(2, 0));
    Rational m21 = fg.g(2, 1), m30 = fg.g(3, 0);
    S xs = X + m21 / (3 * m20) * X * Y + 5 * m21 * m21 / (54 * m20) * X.pow(4);
    S ys = Y + m21 / (3 * m20) * Y * Y + m21 / 3 * X.pow(3) + m21 * m30 / (3 * m20) * X.pow(4) +
           10 * m21 * m21 / (27 * m20) * X.pow(3) * Y;
    fg = detail::run_step("step 1", fg, xs, ys);
  }
  {  // clean degree five
    auto n = [&](int i, int j) { return fg.f(i, j); };
    auto rr = [&](int i, int j) { return fg.g(i, j); };
    S xs = X + (4 * n(4, 1) + rr(3, 2)) / 20 * X.pow(5) + rr(2, 3) / 12 * X.pow(4) * Y;
    S ys = Y - n(5, 0) * X.pow(5) + rr(3, 2) / 4 * X.pow(4) * Y + rr(2, 3) / 3 * X.pow(3) * Y * Y;
    fg = detail::run_step("step 2", fg, xs, ys);
  }
  {  // remove x^3, x^4, x^5 with a time change
    Rational s20 = detail::nonzero("step 3", fg.g(2, 0));
    Rational s30 = fg.g(3, 0), s40 = fg.g(4, 0), s50 = fg.g(5, 0);
    Rational c3 = (175 * s30 * s30 * s30 - 336 * s20 * s30 * s40 + 160 * s20 * s20 * s50);
    S xs = X - s30 / (4 * s20) * X * X + (15 * s30 * s30 - 16 * s20 * s40) / (80 * s20 * s20) * X.pow(3) -
           c3 / (960 * s20 * s20 * s20) * X.pow(4);
    fg = detail::run_step("step 3", fg, xs, Y);
    S tf = S::constant(1) - s30 / (2 * s20) * X + (45 * s30 * s30 - 48 * s20 * s40) / (80 * s20 * s20) * X * X -
           c3 / (240 * s20 * s20 * s20) * X.pow(3);
    auto t = time_rescale(fg.f, fg.g, tf);
    fg = {t.f, t.g};
  }
  Rational w20 = fg.g(2, 0), w31 = fg.g(3, 1), w41 = fg.g(4, 1);
  if (trace_out) {
    trace_out->final_form = fg;
    trace_out->w20 = w20;
    trace_out->w31 = w31;
    trace_out->w41 = w41;
  }
  detail::nonzero("scaling", w20);
  r.M = ScaledRoot{w31 / w20, -w20};
  r.N = ScaledRoot{-w41 / w20, -w20};
  r.codim = codim_from(r);
  return r;
}

// ---------------------------------------------------------------------------
// Velocity coordinates (u, v) = (X, dX/dt) for a field whose first component
// is affine in Y: f = A(X) + B(X) Y. Works in translation mode, so the
// product is formed at a wider cutoff before substituting.
template <class T>
Field2<T> velocity_transform(const Series2<T>& f, const Series2<T>& g) {
  const int n = f.max_degree();
  const int w = 2 * n + 2;
  Series2<T> A(w), B(w);
  f.for_each([&](int i, int j, const T& v) {
    if (j == 0) A.set(i, 0, v);
    else if (j == 1) B.set(i, 0, v);
    else throw std::domain_error("velocity coordinates need a first component affine in y");
  });
  Series2<T> F = f.truncated(w), G = g.truncated(w);
  Series2<T> vdot = F.dx() * F + F.dy() * G;
  Series2<T> X = Series2<T>::x(w), Y = Series2<T>::y(w);
  Series2<T> ysub = (Y - A) * B.recip();
  Series2<T> c = subst(vdot, X, ysub, true);
  return {Series2<T>::y(n), c.truncated(n)};
}

// Corrected closed forms of the velocity-coordinate coefficients c_ij for
// f = sum a_i0 x^i + (a01 + a11 x) y and g = sum b_ij x^i y^j.
template <class T>
std::map<std::pair<int, int>, T> appendix_c(const std::map<std::pair<int, int>, T>& A,
                                            const std::map<std::pair<int, int>, T>& Bm) {
  auto a = [&](int i, int j) {
    auto it = A.find({i, j});
    return it == A.end() ? T(0) : it->second;
  };
  auto b = [&](int i, int j) {
    auto it = Bm.find({i, j});
    return it == Bm.end() ? T(0) : it->second;
  };
  const T a00 = a(0, 0), a10 = a(1, 0), a01 = a(0, 1), a11 = a(1, 1), a20 = a(2, 0), a30 = a(3, 0), a40 = a(4, 0),
          a50 = a(5, 0);
  const T b00 = b(0, 0), b10 = b(1, 0), b01 = b(0, 1), b20 = b(2, 0), b11 = b(1, 1), b02 = b(0, 2), b30 = b(3, 0),
          b21 = b(2, 1), b12 = b(1, 2), b40 = b(4, 0), b31 = b(3, 1), b22 = b(2, 2), b50 = b(5, 0), b32 = b(3, 2),
          b41 = b(4, 1);
  if (a01 == 0) throw std::domain_error("a01 vanishes");
  const T q = a01, q2 = q * q, q3 = q2 * q, q4 = q3 * q, q5 = q4 * q, q6 = q5 * q;
  const T a11_2 = a11 * a11, a11_3 = a11_2 * a11, a11_4 = a11_3 * a11, a11_5 = a11_4 * a11;
  std::map<std::pair<int, int>, T> C;
  C[{0, 0}] = a01 * b00 - a00 * b01 + a00 * a00 * b02 / q;
  C[{0, 1}] = a10 + b01 - a00 * (a11 + 2 * b02) / q;
  C[{1, 0}] = a11 * b00 - a10 * b01 + a01 * b10 - a00 * b11 + a00 / q * (2 * a10 * b02 + a00 * b12) -
              a00 * a00 * a11 * b02 / q2;
  C[{2, 0}] = a11 * b10 + a01 * b20 - a20 * b01 - a10 * b11 - a00 * b21 - a00 * a11 * (2 * a10 * b02 + a00 * b12) / q2 +
              (b02 * (a10 * a10 + 2 * a00 * a20) + a00 * (2 * a10 * b12 + a00 * b22)) / q +
              a00 * a00 * a11_2 * b02 / q3;
  C[{1, 1}] = 2 * a20 + b11 - (a10 * (a11 + 2 * b02) + 2 * a00 * b12) / q + a00 * a11 * (a11 + 2 * b02) / q2;
  C[{0, 2}] = (a11 + b02) / q;
  C[{3, 2}] = b32 / q - a11 * b22 / q2 + a11_2 * b12 / q3 - a11_3 * (a11 + b02) / q4;
  C[{3, 0}] = a11 * b20 + a01 * b30 - a30 * b01 - a20 * b11 - a10 * b21 - a00 * b31 - a00 * a00 * a11_3 * b02 / q4 +
              (2 * b02 * (a10 * a20 + a00 * a30) + b12 * (a10 * a10 + 2 * a00 * a20) + a00 * (2 * a10 * b22 + a00 * b32)) / q -
              (a11 * a10 * (a10 * b02 + 2 * a00 * b12) + a11 * a00 * (2 * a20 * b02 + a00 * b22)) / q2 +
              a00 * a11_2 * (2 * a10 * b02 + a00 * b12) / q3;
  C[{2, 2}] = b22 / q - a11 * b12 / q2 + a11_2 * (a11 + b02) / q3;
  C[{2, 1}] = 3 * a30 + b21 - (a20 * (a11 + 2 * b02) + 2 * (a10 * b12 + a00 * b22)) / q -
              a00 * a11_2 * (a11 + 2 * b02) / q3 + (a11 * a10 * (a11 + 2 * b02) + 2 * a11 * a00 * b12) / q2;
  C[{1, 2}] = b12 / q - a11 * (a11 + b02) / q2;
  C[{3, 1}] = 4 * a40 + b31 - (a30 * (a11 + 2 * b02) + 2 * (a20 * b12 + a10 * b22 + a00 * b32)) / q +
              a00 * a11_3 * (a11 + 2 * b02) / q4 +
              (a11 * a20 * (a11 + 2 * b02) + 2 * a11 * (a10 * b12 + a00 * b22)) / q2 -
              (a11_2 * a10 * (a11 + 2 * b02) + 2 * a11_2 * a00 * b12) / q3;
  C[{4, 0}] = a11 * b30 + a01 * b40 - a40 * b01 - a30 * b11 - a20 * b21 - a10 * b31 - a00 * b41 +
              a00 * a00 * a11_4 * b02 / q5 +
              (b02 * (a20 * a20 + 2 * a10 * a30) + a10 * (2 * a20 * b12 + a10 * b22) +
               2 * a00 * (a40 * b02 + a30 * b12 + a20 * b22 + a10 * b32)) / q -
              a11 * (a10 * a10 * b12 + 2 * a10 * (a20 * b02 + a00 * b22) + a00 * (2 * a30 * b02 + 2 * a20 * b12 + a00 * b32)) / q2 +
              (a11_2 * a10 * (a10 * b02 + 2 * a00 * b12) + a11_2 * a00 * (2 * a20 * b02 + a00 * b22)) / q3 -
              a00 * a11_3 * (2 * a10 * b02 + a00 * b12) / q4;
  C[{5, 0}] = a11 * b40 + a01 * b50 - a50 * b01 - a40 * b11 - a30 * b21 - a20 * b31 - a10 * b41 -
              a00 * a00 * a11_5 * b02 / q6 + 2 * b02 * (a20 * a30 + a10 * a40 + a00 * a50) / q +
              b12 * (a20 * a20 + 2 * a10 * a30 + 2 * a00 * a40) / q +
              (2 * b22 * (a10 * a20 + a00 * a30) + b32 * (a10 * a10 + 2 * a00 * a20)) / q -
              a11 * b02 * (a20 * a20 + 2 * a10 * a30) / q2 -
              (2 * a11 * b12 * (a10 * a20 + a00 * a30) + a11 * b22 * (a10 * a10 + 2 * a00 * a20) +
               2 * a00 * a11 * (a40 * b02 + a10 * b32)) / q2 +
              a11_2 * (2 * b02 * (a10 * a20 + a00 * a30) + b12 * (a10 * a10 + 2 * a00 * a20) + a00 * (2 * a10 * b22 + a00 * b32)) / q3 -
              a11_3 * (a10 * (a10 * b02 + 2 * a00 * b12) + a00 * (2 * a20 * b02 + a00 * b22)) / q4 +
              a00 * a11_4 * (2 * a10 * b02 + a00 * b12) / q5;
  C[{4, 1}] = 5 * a50 + b41 - (a40 * (a11 + 2 * b02) + 2 * (a30 * b12 + a20 * b22 + a10 * b32)) / q +
              (a11 * a30 * (a11 + 2 * b02) + 2 * a11 * (a20 * b12 + a10 * b22 + a00 * b32)) / q2 -
              a00 * a11_4 * (a11 + 2 * b02) / q5 -
              a11_2 * (a20 * (a11 + 2 * b02) + 2 * (a10 * b12 + a00 * b22)) / q3 +
              a11_3 * (a10 * (a11 + 2 * b02) + 2 * a00 * b12) / q4;
  return C;
}

// ---------------------------------------------------------------------------
// Unfolding of the codimension-4 point, evaluated in 128-bit floats.

struct UnfoldingReport {
  Rational gamma;
  std::array<quad, 4> chi0{};                  // chi at lambda = 0
  std::array<std::array<quad, 4>, 4> jac{};    // d chi_i / d lambda_j
  quad jac_det = 0, jac_det_half = 0;          // steps h and h/2
  quad step = 0;
  quad m20 = 0, m41 = 0;
  double relative_change() const {
    return std::abs(static_cast<double>((jac_det - jac_det_half) / jac_det_half));
  }
  bool nonsingular(double tol = 0.01) const { return jac_det != 0 && relative_change() < tol; }
};

inline quad real_root7(const quad& v) {
  using boost::multiprecision::pow;
  quad m = pow(v < 0 ? quad(-v) : v, quad(1) / 7);
  return v < 0 ? quad(-m) : m;
}

struct UnfoldingChain {
  std::array<quad, 4> chi{};
  quad m20 = 0, m41 = 0;
  Field2<quad> normal_form;  // after the seventh-root scaling
};

// chi(lambda) with lambda = (beta, alpha, delta, eta) perturbations of the codim-4 point.
inline UnfoldingChain unfolding_chi(const Rational& gamma, const std::array<quad, 4>& lam) {
  using S = Series2<quad>;
  const Rational g = gamma;
  const Rational c3 = 4 * g * g * g + 19 * g * g + 20 * g + 4;
  const Rational a0 = (2 + g) * (2 + g) / c3, b0 = 4 * pow(1 + g, 3) * (2 + g) * (2 + g) / (c3 * c3);
  const Rational d0 = g * g * (2 + g) / c3, e0 = (g * g + 8 * g + 8) / c3;
  const Rational x0 = g * (2 + g) / c3, y0 = 2 * (1 + g) * (4 + g) / c3;
  auto F = [](const Rational& v) { return from_rational<quad>(v); };
  const quad gq = F(g);
  const S X = S::x(), Y = S::y();
  S x = X + F(x0), y = Y + F(y0);
  S f = x * (quad(1) - x) - gq * x * y - (F(b0) + lam[0]) * x * (x + (F(a0) + lam[1])).recip();
  S h = (F(d0) + lam[2]) * y * (quad(1) - y * (x + (F(e0) + lam[3])).recip());
  Field2<quad> fg = velocity_transform(f, h);

  auto T = [&](const char* name, const S& xs, const S& ys) { fg = detail::run_step(name, fg, xs, ys); };
  auto c = [&](int i, int j) { return fg.g(i, j); };
  {
    quad c02 = c(0, 2);
    T("u-quadratic", X + c02 / 2 * X * X, Y + c02 * X * Y);
  }
  {
    quad d12 = c(1, 2);
    T("u-cubic", X + d12 / 6 * X.pow(3), Y + d12 / 2 * X * X * Y);
  }
  {
    quad e22 = c(2, 2);
    T("u-quartic", X + e22 / 12 * X.pow(4), Y + e22 / 3 * X.pow(3) * Y);
  }
  {
    quad h32 = c(3, 2);
    T("u-quintic", X + h32 / 20 * X.pow(5), Y + h32 / 4 * X.pow(4) * Y);
  }
  {
    quad k20 = detail::nonzero("time change", c(2, 0));
    quad k30 = c(3, 0), k40 = c(4, 0), k50 = c(5, 0);
    quad c3q = 175 * k30 * k30 * k30 - 336 * k20 * k30 * k40 + 160 * k20 * k20 * k50;
    T("time change", X - k30 / (4 * k20) * X * X + (15 * k30 * k30 - 16 * k20 * k40) / (80 * k20 * k20) * X.pow(3) -
                         c3q / (960 * k20 * k20 * k20) * X.pow(4),
      Y);
    S tf = S::constant(quad(1)) - k30 / (2 * k20) * X + (45 * k30 * k30 - 48 * k20 * k40) / (80 * k20 * k20) * X * X -
           c3q / (240 * k20 * k20 * k20) * X.pow(3);
    auto t = time_rescale(fg.f, fg.g, tf);
    fg = {t.f, t.g};
  }
  {
    quad r = c(2, 1) / (3 * detail::nonzero("y-rescale", c(2, 0)));
    T("y-rescale", X, Y + r * Y * Y + r * r / 4 * Y.pow(3));
    S phi = S::constant(quad(1)) + r * Y + r * r / 4 * Y * Y;
    auto t = time_rescale(fg.f, fg.g, phi.recip());
    fg = {t.f, t.g};
  }
  UnfoldingChain out;
  out.m20 = c(2, 0);
  out.m41 = c(4, 1);
  if (out.m20 == 0 || out.m41 == 0) throw chain_error("scaling: m20 or m41 vanishes");
  quad r20 = real_root7(out.m20), r41 = real_root7(out.m41);
  quad k1 = r20 / (r41 * r41);
  quad k2 = -(r20 * r20 * r20 * r20 * r20) / (r41 * r41 * r41);
  quad tt = -r41 / (r20 * r20 * r20 * r20);
  T("scaling", k1 * X, k2 * Y);
  fg = {fg.f * tt, fg.g * tt};
  out.normal_form = fg;
  quad n00 = c(0, 0), n10 = c(1, 0), n01 = c(0, 1), n11 = c(1, 1), n31 = c(3, 1);
  out.chi = {n00 - n10 * n10 / 4, n01 - pow(n10, 4) / 16 - pow(n10, 3) * n31 / 8 - n10 * n11 / 2,
             n11 + pow(n10, 3) / 2 + 3 * n10 * n10 * n31 / 4, 2 * n10 + n31};
  return out;
}

inline UnfoldingReport unfolding_jacobian(const Rational& gamma, double step = 1e-5) {
  if (gamma <= 0) throw std::domain_error("gamma must be positive");
  UnfoldingReport rep;
  rep.gamma = gamma;
  rep.step = quad(step);
  auto base = unfolding_chi(gamma, {0, 0, 0, 0});
  rep.chi0 = base.chi;
  rep.m20 = base.m20;
  rep.m41 = base.m41;
  auto jac_at = [&](const quad& hs) {
    std::array<std::array<quad, 4>, 4> J{};
    for (int j = 0; j < 4; ++j) {
      std::array<quad, 4> lp{0, 0, 0, 0}, lm{0, 0, 0, 0};
      lp[j] = hs;
      lm[j] = -hs;
      auto cp = unfolding_chi(gamma, lp).chi, cm = unfolding_chi(gamma, lm).chi;
      for (int i = 0; i < 4; ++i) J[i][j] = (cp[i] - cm[i]) / (2 * hs);
    }
    return J;
  };
  auto detm = [](const std::array<std::array<quad, 4>, 4>& J) {
    std::vector<std::vector<quad>> m(4, std::vector<quad>(4));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m[i][j] = J[i][j];
    return determinant(m);
  };
  rep.jac = jac_at(rep.step);
  rep.jac_det = detm(rep.jac);
  rep.jac_det_half = detm(jac_at(rep.step / 2));
  return rep;
}

}  // namespace allee
