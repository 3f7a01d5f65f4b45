#pragma once

#include "allee/rational.hpp"
#include "allee/series2.hpp"
#include "allee/surd.hpp"
#include "allee/unipoly.hpp"

#include <array>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace allee {

// Hopf candidate E2* = (z, z+eta) of the time-rescaled polynomial system,
// with alpha and beta chosen so the trace vanishes.
template <class T>
struct HopfPoint {
  T z, delta, gamma, eta;
  T alpha0, beta0, d;
};

template <class T>
T hopf_alpha0(const T& z, const T& dl, const T& g, const T& e) {
  return z * (1 - 2 * z - z * g - dl - g * e) / (z + dl);
}
template <class T>
T hopf_beta0(const T& z, const T& dl, const T& g, const T& e) {
  T w = 1 - z - z * g - g * e;
  return z * w * w / (z + dl);
}

// Returns the first violated inequality of the Hopf region, or "" when inside.
template <class T>
std::string omega_star_violation(const T& z, const T& dl, const T& g, const T& e) {
  if (!(z > 0)) return "z > 0";
  if (!(2 * z < 1)) return "z < 1/2";
  if (!(e > 0)) return "eta > 0";
  if (!(dl > 0)) return "delta > 0";
  if (!(dl * (2 * z + e) < z * (1 - 2 * z))) return "delta < z(1-2z)/(2z+eta)";
  if (!(g * z > dl)) return "gamma > delta/z";
  if (!(g * (z + e) < 1 - 2 * z - dl)) return "gamma < (1-2z-delta)/(z+eta)";
  return "";
}

template <class T>
HopfPoint<T> hopf_point(const T& z, const T& dl, const T& g, const T& e) {
  std::string v = omega_star_violation(z, dl, g, e);
  if (!v.empty()) throw std::domain_error("outside the Hopf region: violates " + v);
  HopfPoint<T> h{z, dl, g, e, hopf_alpha0(z, dl, g, e), hopf_beta0(z, dl, g, e), T(0)};
  T w = 1 - z - z * g - g * e;
  h.d = z * z * dl * (z * g - dl) * (z + e) * (z + e) * w * w / ((z + dl) * (z + dl));
  return h;
}

namespace detail {

template <class T>
bool negligible(const T& v, const T& scale) {
  if constexpr (is_exact_v<T>) {
    (void)scale;
    return v == 0;
  } else {
    return abs_of(v) <= std::numeric_limits<T>::epsilon() * T(1e4) * (scale > 0 ? scale : T(1));
  }
}

template <class T>
T max_abs(const std::vector<std::vector<T>>& m) {
  T s(0);
  for (const auto& r : m)
    for (const auto& v : r)
      if (abs_of(v) > s) s = abs_of(v);
  return s;
}

// Solves a consistent (possibly overdetermined) system; free unknowns are 0.
template <class T>
std::vector<T> solve_consistent(std::vector<std::vector<T>> A, std::vector<T> b) {
  const std::size_t rows = A.size(), cols = A[0].size();
  const T scale = max_abs(A);
  std::vector<std::size_t> piv_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    for (std::size_t i = r + 1; i < rows; ++i)
      if (abs_of(A[i][c]) > abs_of(A[p][c])) p = i;
    if (negligible(A[p][c], scale)) continue;
    std::swap(A[r], A[p]);
    std::swap(b[r], b[p]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || A[i][c] == 0) continue;
      T f = A[i][c] / A[r][c];
      for (std::size_t j = c; j < cols; ++j) A[i][j] -= f * A[r][j];
      b[i] -= f * b[r];
    }
    piv_col.push_back(c);
    ++r;
  }
  std::vector<T> x(cols, T(0));
  for (std::size_t i = 0; i < piv_col.size(); ++i) x[piv_col[i]] = b[i] / A[i][piv_col[i]];
  return x;
}

// A vector spanning the kernel of a corank-one square matrix (complete pivoting).
template <class T>
std::vector<T> null_vector(std::vector<std::vector<T>> A) {
  const std::size_t n = A.size();
  const T scale = max_abs(A);
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::size_t rank = 0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pr = k, pc = k;
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = k; j < n; ++j)
        if (abs_of(A[i][j]) > abs_of(A[pr][pc])) pr = i, pc = j;
    if (negligible(A[pr][pc], scale)) break;
    std::swap(A[k], A[pr]);
    for (auto& row : A) std::swap(row[k], row[pc]);
    std::swap(perm[k], perm[pc]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || A[i][k] == 0) continue;
      T f = A[i][k] / A[k][k];
      for (std::size_t j = k; j < n; ++j) A[i][j] -= f * A[k][j];
    }
    ++rank;
  }
  if (rank != n - 1) throw std::domain_error("focal engine: unexpected kernel dimension");
  std::vector<T> v(n, T(0));
  v[perm[n - 1]] = T(1);
  for (std::size_t i = 0; i + 1 < n; ++i) v[perm[i]] = -A[i][n - 1] / A[i][i];
  return v;
}

}  // namespace detail

// Formal first integral F = H2 + sum_{k>=3} F_k for the polynomial system at
// E2*. Returns the obstructions V_1..V_order found at degrees 4, 6, ...
// Local coordinates are (x - z, y - z - eta) / scale.
template <class T>
std::vector<T> focal_obstructions(const T& z, const T& dl, const T& g, const T& e, int order,
                                  const T& scale = T(1)) {
  if (order < 1 || order > 5) throw std::domain_error("focal order must be in 1..5");
  using S = Series2<T>;
  const int N = 2 * order + 2;
  const T al = hopf_alpha0(z, dl, g, e), be = hopf_beta0(z, dl, g, e);
  const S X = S::x(N), Y = S::y(N);
  if (!(scale > 0)) throw std::domain_error("coordinate scale must be positive");
  S x = X * scale + z, y = Y * scale + (z + e);
  S xa = x + al, xe = x + e;
  S P = x * xe * ((T(1) - x) * xa - g * y * xa - be) * T(1 / scale);
  S Q = dl * y * xa * (xe - y) * T(1 / scale);
  const T a = P(1, 0), b = P(0, 1), c = Q(1, 0), a2 = Q(0, 1);
  if constexpr (is_exact_v<T>) {
    if (P.constant_term() != 0 || Q.constant_term() != 0) throw std::domain_error("E2* is not an equilibrium");
    if (a + a2 != 0) throw std::domain_error("trace does not vanish at E2*");
  }
  S Pn(N), Qn(N);
  for (int d = 2; d <= N; ++d) {
    Pn += P.homogeneous(d);
    Qn += Q.homogeneous(d);
  }
  // Quadratic invariant of the linear part (a b; c -a).
  S H2 = S::monomial(2, 0, c, N) + S::monomial(1, 1, T(-2 * a), N) + S::monomial(0, 2, T(-b), N);
  auto lin = [&](const S& p) { return p.dx() * (a * X + b * Y) + p.dy() * (c * X - a * Y); };
  S Fsum = H2;
  std::vector<T> V;
  S Hpow = H2;  // H2^(k/2) at even k
  for (int k = 3; k <= N; ++k) {
    S R = (Fsum.dx() * Pn + Fsum.dy() * Qn).homogeneous(k);
    const std::size_t m = static_cast<std::size_t>(k) + 1;
    std::vector<std::vector<T>> M(m, std::vector<T>(m, T(0)));
    for (std::size_t col = 0; col < m; ++col) {
      S img = lin(S::monomial(k - static_cast<int>(col), static_cast<int>(col), T(1), N));
      for (std::size_t row = 0; row < m; ++row) M[row][col] = img(k - static_cast<int>(row), static_cast<int>(row));
    }
    std::vector<T> rhs(m);
    for (std::size_t row = 0; row < m; ++row) rhs[row] = -R(k - static_cast<int>(row), static_cast<int>(row));
    std::vector<T> sol;
    if (k % 2 == 1) {
      sol = detail::solve_consistent(M, rhs);
    } else {
      if (k > 2) Hpow = Hpow * H2;  // degree k
      std::vector<std::vector<T>> MT(m, std::vector<T>(m));
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) MT[i][j] = M[j][i];
      std::vector<T> l = detail::null_vector(MT);
      T num(0), den(0);
      for (std::size_t i = 0; i < m; ++i) {
        T hv = Hpow(k - static_cast<int>(i), static_cast<int>(i));
        num += l[i] * (-rhs[i]);
        den += l[i] * hv;
      }
      if (den == 0) throw std::domain_error("focal engine: degenerate normalization");
      T Vk = num / den;
      V.push_back(Vk);
      auto A2 = M;
      A2.push_back(l);
      std::vector<T> r2(m + 1, T(0));
      for (std::size_t i = 0; i < m; ++i) r2[i] = rhs[i] + Vk * Hpow(k - static_cast<int>(i), static_cast<int>(i));
      sol = detail::solve_consistent(A2, r2);
    }
    for (std::size_t i = 0; i < m; ++i) Fsum.add_to(k - static_cast<int>(i), static_cast<int>(i), sol[i]);
  }
  return V;
}

// Positive constants fixing the focal numerators' normalization.
inline const std::array<long long, 5>& focal_constants() {
  static const std::array<long long, 5> C{4, 96, 9216, 4423680, 25480396800LL};
  return C;
}

// Numerators L_mm: polynomial in (z, delta, gamma, eta), positive multiples
// of the focal values on the Hopf region.
template <class T>
std::vector<T> focal_numerators(const T& z, const T& dl, const T& g, const T& e, int order) {
  auto V = focal_obstructions(z, dl, g, e, order);
  const T w = 1 - z - z * g - g * e;
  const T s = dl * (z * g - dl);
  const T t = z * (z + e) * w / (z + dl);
  std::vector<T> out;
  for (int m = 1; m <= order; ++m) {
    T v = T(std::to_string(focal_constants()[m - 1])) * pow_int<T>(z, 2 * m - 1) * pow_int<T>(T(z + e), 2 * m - 1) *
          pow_int<T>(w, 2 * m) * pow_int<T>(s, 3 * m - 1) * V[m - 1] / pow_int<T>(dl, m) * pow_int<T>(t, m - 1) / g;
    out.push_back(v);
  }
  return out;
}

// L_m from its numerator; evaluated in 113-bit floats.
inline quad focal_value_from_numerator(int m, const quad& Lmm, const quad& z, const quad& dl, const quad& g,
                                       const quad& e) {
  using boost::multiprecision::sqrt;
  quad w = 1 - z - z * g - g * e;
  quad s = dl * (z * g - dl);
  quad den = quad(focal_constants()[m - 1]) * pow_int(z, 2 * m - 1) * sqrt(pow_int(s, 4 * m - 1)) *
             pow_int(quad(z + e), 2 * m - 1) * pow_int(w, 2 * m);
  return g * Lmm / den;
}

// Closed form of the first numerator. The z^3 coefficient carries +9 gamma delta eta.
template <class T>
T L11_closed(const T& z, const T& d, const T& g, const T& e) {
  T g2 = g * g, g3 = g2 * g, d2 = d * d, d3 = d2 * d, e2 = e * e;
  T c5 = 4 * g2 + 7 * g + 2;
  T c4 = g3 * d + 10 * g2 * d + 6 * g2 * e + 5 * g * e + 15 * g * d - 4 * g + 2 * d + 2 * e;
  T c3 = 2 * g3 * d * e + 14 * g2 * d * e + 2 * g2 * e2 + 3 * g2 * d2 + 5 * g * d2 - 2 * g2 * d + 9 * g * d * e +
         4 * d * e - 2 * g * e - 4 * d2 - 10 * g * d + 3 * d;
  T c2 = g3 * d * e2 + 4 * g2 * d * e2 - g * d * e2 + 4 * g2 * d2 * e + g * d2 * e + d2 * e - 2 * g2 * d * e -
         4 * g * d * e + d * e - 4 * d3 - 2 * g * d2 + 8 * d2 + g * d;
  T c1 = g2 * d2 * e2 - 2 * g * d2 * e2 - g * d3 * e - 2 * d3 * e + 2 * d2 * e - d3 * d + 3 * d3 - d2;
  T c0 = -d3 * e * (d + g * e - 1);
  return ((((c5 * z + c4) * z + c3) * z + c2) * z + c1) * z + c0;
}

struct FocalReport {
  bool exact = false;
  std::vector<std::string> numerators;  // exact "p/q" or decimal
  std::vector<double> numerators_d;
  std::vector<double> values;  // L_1..L_k
  int order = 0;               // first nonzero index, 0 if none within range
};

inline std::string float_str(const quad& v) { return v.str(20, std::ios_base::scientific); }

inline FocalReport focal_values(const HopfPoint<Rational>& h, int max_order) {
  FocalReport rep;
  rep.exact = true;
  auto L = focal_numerators(h.z, h.delta, h.gamma, h.eta, max_order);
  auto q = [](const Rational& v) { return from_rational<quad>(v); };
  for (int m = 1; m <= max_order; ++m) {
    const Rational& v = L[m - 1];
    rep.numerators.push_back(str(v));
    rep.numerators_d.push_back(v.get_d());
    rep.values.push_back(static_cast<double>(
        focal_value_from_numerator(m, q(v), q(h.z), q(h.delta), q(h.gamma), q(h.eta))));
    if (!rep.order && v != 0) rep.order = m;
  }
  return rep;
}

template <class F>
FocalReport focal_values_float(const F& z, const F& dl, const F& g, const F& e, int max_order) {
  std::string v = omega_star_violation(z, dl, g, e);
  if (!v.empty()) throw std::domain_error("outside the Hopf region: violates " + v);
  FocalReport rep;
  auto L = focal_numerators(z, dl, g, e, max_order);
  for (int m = 1; m <= max_order; ++m) {
    rep.numerators.push_back(quad(L[m - 1]).str(20, std::ios_base::scientific));
    rep.numerators_d.push_back(static_cast<double>(L[m - 1]));
    rep.values.push_back(static_cast<double>(
        focal_value_from_numerator(m, quad(L[m - 1]), quad(z), quad(dl), quad(g), quad(e))));
  }
  return rep;
}

// Roots z in (0, 1/2) of alpha0(z) = alpha, i.e.
// (2+g) z^2 - (1 - d - g e - alpha) z + alpha d = 0, restricted to the Hopf region.
struct ZRecovery {
  QSurd z;
  double beta0 = 0;  // beta implied by z; compare with the supplied beta
};

inline std::vector<ZRecovery> recover_z(const Rational& alpha, const Rational& g, const Rational& dl,
                                        const Rational& e) {
  Rational A = 2 + g, B = -(1 - dl - g * e - alpha), C = alpha * dl;
  Rational disc = B * B - 4 * A * C;
  std::vector<ZRecovery> out;
  if (disc < 0) return out;
  Rational half = 1 / (2 * A);
  for (int s : {-1, 1}) {
    QSurd z(-B * half, Rational(s) * half, disc);
    QSurd one(Rational(1)), two(Rational(2));
    QSurd D(dl), G(g), E(e);
    bool ok = z.sign() > 0 && (one - two * z).sign() > 0 && (z * (one - two * z) - D * (two * z + E)).sign() > 0 &&
              (G * z - D).sign() > 0 && ((one - two * z - D) - G * (z + E)).sign() > 0;
    if (!ok) continue;
    QSurd w = one - z - z * G - G * E;
    QSurd b0 = z * w * w / (z + D);
    out.push_back({z, b0.to_double()});
    if (disc == 0) break;
  }
  return out;
}

// Positive root of 2z^2 + 5 d z + 2 d^2 - d in z.
inline QSurd z_star(const Rational& dl) {
  if (dl <= 0 || dl >= Rational(1, 2)) throw std::domain_error("z* needs 0 < delta < 1/2");
  return QSurd(-5 * dl / 4, Rational(1, 4), dl * (8 + 9 * dl));
}

inline Rational R1_of(const Rational& z, const Rational& d) { return 2 * z * z + 5 * d * z + 2 * d * d - d; }
inline Rational R2_of(const Rational& z, const Rational& d, const Rational& g) {
  return 2 * g * z * z * z + d * g * g * z * z + 4 * d * g * z * z - d * z * z + d * d * g * z - 2 * d * d * z -
         d * d * d;
}

namespace detail {

// Interpolates k -> f(k) at integer nodes until one extra node confirms the
// polynomial. Nodes where f throws domain_error are skipped.
template <class T, class Fn>
UniPoly<T> stable_interpolation(Fn f, const std::string& var, int max_degree) {
  std::vector<T> xs, ys;
  const int max_nodes = max_degree + 2, max_tries = 4 * max_nodes + 16;
  for (int k = 1, tries = 0; static_cast<int>(xs.size()) < max_nodes && tries < max_tries; ++k, ++tries) {
    T v;
    try {
      v = f(k);
    } catch (const std::domain_error&) {
      continue;
    }
    xs.push_back(T(k));
    ys.push_back(v);
    if (xs.size() < 3) continue;
    std::vector<T> hx(xs.begin(), xs.end() - 1), hy(ys.begin(), ys.end() - 1);
    auto p = interpolate(hx, hy, var);
    T pred = p(xs.back());
    bool match;
    if constexpr (is_exact_v<T>) {
      match = pred == ys.back();
    } else {
      T sc = abs_of(ys.back()) + coeff_norm(p);
      match = abs_of(pred - ys.back()) <= sc * T(1e-40);
    }
    if (match) return p;
  }
  throw std::domain_error("value did not stabilize as a polynomial in " + var);
}

}  // namespace detail

// Focal numerator L_mm as a polynomial in eta at fixed (z, delta, gamma),
// recovered by interpolation at integer eta and confirmed at one extra node.
template <class T>
UniPoly<T> numerator_in_eta(const T& z, const T& dl, const T& g, int m, int max_degree = 40) {
  return detail::stable_interpolation<T>([&](int k) { return focal_numerators(z, dl, g, T(k), m)[m - 1]; }, "eta",
                                         max_degree);
}

struct ResultantTriple {
  Rational r12, r13, r14;
  Rational q12, q13, q14;  // quotients by the printed prefactors
};

inline Rational prefactor(int which, const Rational& z, const Rational& d, const Rational& g) {
  Rational R = R1_of(z, d) * R2_of(z, d, g);
  switch (which) {
    case 2: return 4 * d * d * pow(g, 4) * pow(z, 3) * pow(1 - z, 3) * pow(d + z, 10) * pow(d - g * z, 6) * R;
    case 3: return 16 * d * d * pow(g, 7) * pow(z, 8) * pow(1 - z, 5) * pow(d + z, 14) * pow(d - g * z, 8) * R;
    case 4: return 64 * d * d * pow(g, 8) * pow(z, 10) * pow(1 - z, 7) * pow(d + z, 18) * pow(d - g * z, 10) * R;
  }
  throw std::invalid_argument("prefactor index");
}

inline ResultantTriple focal_resultants(const Rational& z, const Rational& dl, const Rational& g, int upto = 4) {
  ResultantTriple t;
  auto L1 = numerator_in_eta(z, dl, g, 1);
  if (L1.is_zero()) throw std::domain_error("L11 vanishes identically in eta");
  auto one = [&](int m, Rational& r, Rational& q) {
    auto Lm = numerator_in_eta(z, dl, g, m);
    if (Lm.is_zero()) throw std::domain_error("focal numerator vanishes identically in eta");
    r = resultant(L1, Lm);
    Rational pf = prefactor(m, z, dl, g);
    q = pf == 0 ? Rational(0) : r / pf;
  };
  one(2, t.r12, t.q12);
  if (upto >= 3) one(3, t.r13, t.q13);
  if (upto >= 4) one(4, t.r14, t.q14);
  return t;
}

// r12 as an exact polynomial in gamma at fixed (z, delta), divided by the
// printed prefactor taken as a polynomial in gamma.
struct Divisibility {
  Rational z, delta;
  UniPoly<Rational> r12, prefactor, quotient, remainder;
  bool divides() const { return !r12.is_zero() && remainder.is_zero(); }
};

inline Divisibility prefactor_divisibility(const Rational& z, const Rational& d, int max_degree = 80) {
  Divisibility out;
  out.z = z;
  out.delta = d;
  out.r12 = detail::stable_interpolation<Rational>(
      [&](int k) {
        Rational g(k);
        auto L1 = numerator_in_eta(z, d, g, 1), L2 = numerator_in_eta(z, d, g, 2);
        if (L1.is_zero() || L2.is_zero()) throw std::domain_error("numerator vanishes identically");
        return resultant(L1, L2);
      },
      "gamma", max_degree);
  out.prefactor = detail::stable_interpolation<Rational>([&](int k) { return prefactor(2, z, d, Rational(k)); },
                                                         "gamma", 40);
  auto qr = divmod(out.r12, out.prefactor);
  out.quotient = qr.first;
  out.remainder = qr.second;
  return out;
}

// Numeric check at z = z*(delta): resultants of L11 with L22, L33, L44 in eta.
struct CenterCheck {
  double z = 0;
  oct gamma = 0;
  std::array<double, 3> relative{};          // |Res| / (||f||^deg g ||g||^deg f) at z*
  std::array<double, 3> control_relative{};  // the same off the locus
  // min over real roots r of L1 of |L_m(r)| / sum |c_k| |r|^k; 1 if L1 has no real root
  std::array<double, 3> root_residual{};
  std::array<double, 3> control_root_residual{};
  double floor = 1e-8;
  // On the locus both measures must sit below the floor; off it the residual
  // must stay above. The norm-product ratio shrinks with degree even at
  // generic points, so it is reported for the control but not tested.
  bool passed() const {
    for (int i = 0; i < 3; ++i)
      if (!(relative[i] < floor) || !(root_residual[i] < floor) || !(control_root_residual[i] > floor)) return false;
    return true;
  }
};

inline double relative_resultant(const UniPoly<oct>& f, const UniPoly<oct>& g) {
  using boost::multiprecision::pow;
  oct r = resultant(f, g);
  oct bound = pow(coeff_norm(f), g.degree()) * pow(coeff_norm(g), f.degree());
  return static_cast<double>(abs_of(r) / bound);
}

// Real roots of a polynomial of degree <= 2.
inline std::vector<oct> real_roots_quadratic(const UniPoly<oct>& f) {
  using boost::multiprecision::sqrt;
  if (f.degree() > 2) throw std::invalid_argument("expected degree <= 2");
  std::vector<oct> out;
  if (f.degree() == 1) {
    out.push_back(-f.coeffs()[0] / f.coeffs()[1]);
  } else if (f.degree() == 2) {
    oct a = f.coeffs()[2], b = f.coeffs()[1], c = f.coeffs()[0];
    oct disc = b * b - 4 * a * c;
    if (disc >= 0) {
      oct q = -(b + (b < 0 ? -sqrt(disc) : sqrt(disc))) / 2;
      out.push_back(q / a);
      if (q != 0) out.push_back(c / q);
    }
  }
  return out;
}

inline double relative_residual_at(const UniPoly<oct>& g, const oct& r) {
  oct v = 0, s = 0, pw = 1;
  for (int k = 0; k <= g.degree(); ++k) {
    v += g.coeffs()[k] * pw;
    s += abs_of(g.coeffs()[k] * pw);
    pw *= r;
  }
  return s == 0 ? 0.0 : static_cast<double>(abs_of(v) / s);
}

inline CenterCheck degenerate_center_check(const Rational& dl, const Rational& gamma = Rational(3),
                                           const Rational& control_z = Rational(1, 5)) {
  CenterCheck out;
  QSurd zs = z_star(dl);
  oct z = zs.to<oct>(), d = from_rational<oct>(dl), g = from_rational<oct>(gamma);
  out.z = static_cast<double>(z);
  out.gamma = g;
  auto run = [&](const oct& zz, std::array<double, 3>& rel, std::array<double, 3>& res) {
    auto L1 = numerator_in_eta(zz, d, g, 1);
    auto roots = real_roots_quadratic(L1);
    for (int m = 2; m <= 4; ++m) {
      auto Lm = numerator_in_eta(zz, d, g, m);
      rel[m - 2] = relative_resultant(L1, Lm);
      double best = 1;
      for (const auto& r : roots) best = std::min(best, relative_residual_at(Lm, r));
      res[m - 2] = best;
    }
  };
  run(z, out.relative, out.root_residual);
  run(from_rational<oct>(control_z), out.control_relative, out.control_root_residual);
  return out;
}

}  // namespace allee
