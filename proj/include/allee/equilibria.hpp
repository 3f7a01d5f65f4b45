#pragma once

#include "allee/model.hpp"
#include "allee/rational.hpp"
#include "allee/surd.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace allee {

enum class Kind {
  Saddle,
  StableNode,
  UnstableNode,
  StableFocus,
  UnstableFocus,
  CenterCandidate,
  SaddleNode,
  NilpotentCandidate,
  NonIsolatedOrError
};

enum class Sector { None, Attracting, Repelling };

inline const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Saddle: return "Saddle";
    case Kind::StableNode: return "StableNode";
    case Kind::UnstableNode: return "UnstableNode";
    case Kind::StableFocus: return "StableFocus";
    case Kind::UnstableFocus: return "UnstableFocus";
    case Kind::CenterCandidate: return "CenterCandidate";
    case Kind::SaddleNode: return "SaddleNode";
    case Kind::NilpotentCandidate: return "NilpotentCandidate";
    case Kind::NonIsolatedOrError: return "NonIsolatedOrError";
  }
  return "?";
}

inline const char* sector_name(Sector s) {
  switch (s) {
    case Sector::Attracting: return "attracting";
    case Sector::Repelling: return "repelling";
    default: return "none";
  }
}

struct EquilibriumReport {
  std::string name;
  QSurd x, y;
  Kind kind = Kind::NonIsolatedOrError;
  Sector sector = Sector::None;
  QSurd trace, det, discriminant;  // discriminant = trace^2 - 4 det
  Rational delta1, delta2;
  std::optional<QSurd> center_manifold_coeff;

  State<double> location() const { return {x.to_double(), y.to_double()}; }
  bool attracting() const { return kind == Kind::StableNode || kind == Kind::StableFocus; }
};

inline Rational delta1(const Params<Rational>& p) { return (1 + p.alpha) * (1 + p.alpha) - 4 * p.beta; }

inline Rational delta2(const Params<Rational>& p) {
  Rational B = p.gamma * (p.alpha + p.eta) + p.alpha - 1;
  return B * B - 4 * (1 + p.gamma) * (p.alpha * (p.gamma * p.eta - 1) + p.beta);
}

// Classification from the exact signs of trace, determinant and discriminant.
// Nonzero Jacobian is required for NilpotentCandidate.
inline Kind classify(const QSurd& tr, const QSurd& dt, const QSurd& disc, bool jacobian_zero) {
  int st = tr.sign(), sd = dt.sign();
  if (sd < 0) return Kind::Saddle;
  if (sd == 0) {
    if (st != 0) return Kind::SaddleNode;
    return jacobian_zero ? Kind::NonIsolatedOrError : Kind::NilpotentCandidate;
  }
  if (st == 0) return Kind::CenterCandidate;
  bool focus = disc.sign() < 0;
  if (st < 0) return focus ? Kind::StableFocus : Kind::StableNode;
  return focus ? Kind::UnstableFocus : Kind::UnstableNode;
}

namespace detail {

inline QSurd sq(const QSurd& v) { return v * v; }

// Jacobian entries of the nondimensional field at (x, y), exact in Q(sqrt d).
inline std::array<QSurd, 4> jacobian_surd(const Params<Rational>& p, const QSurd& x, const QSurd& y) {
  QSurd xa = x + QSurd(p.alpha), xe = x + QSurd(p.eta);
  QSurd one(Rational(1)), two(Rational(2));
  QSurd j00 = one - two * x - QSurd(p.gamma) * y - QSurd(p.beta * p.alpha) / sq(xa);
  QSurd j01 = -(QSurd(p.gamma) * x);
  QSurd j10 = QSurd(p.delta) * sq(y) / sq(xe);
  QSurd j11 = QSurd(p.delta) * (one - two * y / xe);
  return {j00, j01, j10, j11};
}

inline EquilibriumReport make_report(const Params<Rational>& p, std::string name, const QSurd& x, const QSurd& y) {
  EquilibriumReport r;
  r.name = std::move(name);
  r.x = x;
  r.y = y;
  r.delta1 = delta1(p);
  r.delta2 = delta2(p);
  auto j = jacobian_surd(p, x, y);
  r.trace = j[0] + j[3];
  r.det = j[0] * j[3] - j[1] * j[2];
  r.discriminant = r.trace * r.trace - QSurd(Rational(4)) * r.det;
  bool zero = j[0].is_zero() && j[1].is_zero() && j[2].is_zero() && j[3].is_zero();
  r.kind = classify(r.trace, r.det, r.discriminant, zero);
  // The parabolic sector of a saddle-node inherits the stability of the
  // nonzero eigenvalue, which equals the trace.
  if (r.kind == Kind::SaddleNode) r.sector = r.trace.sign() < 0 ? Sector::Attracting : Sector::Repelling;
  return r;
}

}  // namespace detail

inline std::vector<EquilibriumReport> boundary_equilibria(const Params<Rational>& p) {
  p.validate();
  std::vector<EquilibriumReport> out;
  out.push_back(detail::make_report(p, "E0", QSurd(Rational(0)), QSurd(Rational(0))));
  if (p.beta == p.alpha && p.alpha != 1) {
    // Prey axis flow x((1-x)(x+a)-b)/(x+a) has x^2 coefficient (1-a)/a.
    out.back().center_manifold_coeff = QSurd((1 - p.alpha) / p.alpha);
  }
  out.push_back(detail::make_report(p, "E1", QSurd(Rational(0)), QSurd(p.eta)));
  Rational d1 = delta1(p);
  if (d1 > 0) {
    Rational half(1, 2);
    QSurd x2((1 - p.alpha) / 2, -half, d1), x3((1 - p.alpha) / 2, half, d1);
    if (x2.sign() > 0) out.push_back(detail::make_report(p, "E2", x2, QSurd(Rational(0))));
    if (x3.sign() > 0) out.push_back(detail::make_report(p, "E3", x3, QSurd(Rational(0))));
  } else if (d1 == 0 && p.alpha < 1) {
    auto r = detail::make_report(p, "E4", QSurd((1 - p.alpha) / 2), QSurd(Rational(0)));
    r.center_manifold_coeff = QSurd(-(1 - p.alpha) / (p.delta * (1 + p.alpha)));
    out.push_back(r);
  }
  return out;
}

// Positive equilibria from (1+g)x^2 + (g(a+e)+a-1)x + a(g e-1)+b = 0, y = x+e.
// E1* is the smaller root, E2* the larger; E* is the double root.
inline std::vector<EquilibriumReport> positive_equilibria(const Params<Rational>& p) {
  p.validate();
  std::vector<EquilibriumReport> out;
  Rational A = 1 + p.gamma;
  Rational B = p.gamma * (p.alpha + p.eta) + p.alpha - 1;
  Rational d2 = delta2(p);
  if (d2 < 0) return out;
  auto add = [&](const char* name, const QSurd& x) {
    if (x.sign() > 0) out.push_back(detail::make_report(p, name, x, x + QSurd(p.eta)));
  };
  if (d2 == 0) {
    add("E*", QSurd(-B / (2 * A)));
    if (!out.empty() && out.back().kind == Kind::SaddleNode) {
      const Rational& a = p.alpha;
      const Rational& g = p.gamma;
      const Rational& e = p.eta;
      const Rational& dl = p.delta;
      Rational W = 1 - a - a * g - g * e;
      Rational den = (1 + a + a * g - g * e) * (2 * dl - g * (W - 2 * dl)) * (2 * dl - g * (W - 2 * dl));
      if (den != 0) out.back().center_manifold_coeff = QSurd(4 * dl * pow(1 + g, 3) * W / den);
    }
    return out;
  }
  Rational half_a = 1 / (2 * A);
  add("E1*", QSurd(-B * half_a, -half_a, d2));
  add("E2*", QSurd(-B * half_a, half_a, d2));
  return out;
}

inline std::vector<EquilibriumReport> all_equilibria(const Params<Rational>& p) {
  auto b = boundary_equilibria(p);
  auto q = positive_equilibria(p);
  b.insert(b.end(), q.begin(), q.end());
  return b;
}

// Quadratic centre-manifold coefficient for a saddle-node: the closed form
// for the positive double equilibrium, the prey-axis coefficient for E4.
inline QSurd saddle_node_coefficient(const Params<Rational>& p, const EquilibriumReport& e) {
  if (e.det.sign() != 0) throw std::domain_error("not a saddle-node: det != 0");
  if (e.trace.sign() == 0) throw std::domain_error("trace vanishes: nilpotent case, use the normal form module");
  if (!e.center_manifold_coeff) throw std::domain_error("no centre-manifold coefficient for " + e.name);
  (void)p;
  return *e.center_manifold_coeff;
}

}  // namespace allee
