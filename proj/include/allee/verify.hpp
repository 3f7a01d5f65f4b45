#pragma once

// Regression criteria shared by the `verify` subcommand and the acceptance
// binary. Each check returns a pass flag, a one-line detail and timing.

#include "allee/equilibria.hpp"
#include "allee/focal.hpp"
#include "allee/normalform.hpp"
#include "allee/report.hpp"
#include "allee/simulate.hpp"

#include <chrono>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace allee {

struct Criterion {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0;
  double budget = 0;  // seconds
  json data;
};

inline json to_json(const Criterion& c) {
  return {{"id", c.id},           {"title", c.title},   {"pass", c.pass}, {"detail", c.detail},
          {"seconds", c.seconds}, {"budget", c.budget}, {"data", c.data}};
}

// Parameter sets used across the checks.
namespace presets {
inline Params<Rational> extinction() { return {Rational(1, 2), Rational(1), Rational(1), Rational(1, 2), Rational(1, 5)}; }
inline Params<Rational> cusp4() {
  return {Rational(49, 361), Rational(12250, 130321), Rational(3, 2), Rational(63, 722), Rational(89, 361)};
}
inline Params<Rational> weak_focus() {
  return {Rational(13, 2500), Rational(163, 10000), Rational(809, 100), Rational(1, 10), Rational(1, 100)};
}
// Weak focus with negative first focal value.
inline HopfPoint<Rational> supercritical() { return hopf_point(Rational(1, 10), Rational(1, 10), Rational(2), Rational(1, 10)); }
}  // namespace presets

// Deterministic samplers.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  // lo + (hi - lo) k / den for k uniform in 1..den-1.
  Rational between(const Rational& lo, const Rational& hi, long den = 97) {
    std::uniform_int_distribution<long> d(1, den - 1);
    return lo + (hi - lo) * ratio(d(rng_), den);
  }
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  // Explicit 53-bit mapping; std distributions differ between standard libraries.
  double uniform(double lo, double hi) { return lo + (hi - lo) * (static_cast<double>(rng_() >> 11) * 0x1.0p-53); }

  // (z, delta, gamma, eta) strictly inside the Hopf region.
  std::array<Rational, 4> omega_star() {
    Rational e = between(Rational(0), Rational(1, 4));
    Rational z = between(Rational(0), Rational(1, 2));
    Rational dmax = z * (1 - 2 * z) / (2 * z + e);
    Rational d = between(Rational(0), dmax);
    Rational glo = d / z, ghi = (1 - 2 * z - d) / (z + e);
    if (!(ghi > glo)) return omega_star();
    Rational g = between(glo, ghi);
    return {z, d, g, e};
  }

  // A point on the cusp locus that passes the nilpotency checks.
  CuspLocus locus_point() {
    for (;;) {
      Rational g = between(Rational(0), Rational(4), 89);
      Rational e = between(Rational(0), 1 / g, 83);
      try {
        auto c = cusp_locus(g, e);
        require_nilpotent(c.params());
        return c;
      } catch (const std::domain_error&) {
      }
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

constexpr std::uint64_t kVerifySeed = 20240607;

namespace detail {

template <class Fn>
Criterion timed(int id, std::string title, double budget, Fn fn) {
  Criterion c;
  c.id = id;
  c.title = std::move(title);
  c.budget = budget;
  auto t0 = std::chrono::steady_clock::now();
  try {
    fn(c);
  } catch (const std::exception& ex) {
    c.pass = false;
    c.detail = std::string("exception: ") + ex.what();
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (c.seconds > c.budget) {
    c.pass = false;
    c.detail += " [over time budget]";
  }
  return c;
}

inline std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

}  // namespace detail

inline Criterion criterion_1() {
  return detail::timed(1, "cusp-locus exactness", 0.001, [](Criterion& c) {
    auto loc = cusp_locus(Rational(3, 2), Rational(89, 361));
    auto f5 = presets::cusp4();
    bool ok = loc.alpha0 == f5.alpha && loc.beta0 == f5.beta && loc.delta0 == f5.delta && loc.eta0 == Rational(89, 361);
    c.pass = ok;
    c.detail = "alpha0=" + str(loc.alpha0) + " beta0=" + str(loc.beta0) + " delta0=" + str(loc.delta0) +
               " eta0=" + str(loc.eta0);
    c.data = to_json(loc);
  });
}

inline Criterion criterion_2() {
  return detail::timed(2, "codimension ladder", 1.0, [](Criterion& c) {
    auto r4 = cusp_report_closed(presets::cusp4());
    bool four = r4.d11 == 0 && r4.M && r4.M->is_zero() && r4.N && !r4.N->is_zero() && r4.codim == 4;
    auto r3 = cusp_report_closed(cusp_locus(Rational(3, 2), Rational(1, 10)).params());
    bool three = r3.d11 == 0 && r3.M && !r3.M->is_zero() && r3.codim == 3;
    auto p2 = nilpotent_point(Rational(1, 5), Rational(3, 2), Rational(1, 10));
    bool region = p2.alpha < 1 && p2.gamma < (1 - p2.alpha) / (p2.alpha + p2.eta);
    auto r2 = cusp_report_closed(p2);
    bool two = region && r2.d20 != 0 && r2.d11 != 0 && r2.codim == 2;
    c.pass = four && three && two;
    c.detail = "cusp4 codim " + r4.codim_tag() + ", (3/2,1/10) codim " + r3.codim_tag() + ", generic codim " +
               r2.codim_tag();
    c.data = {{"codim4", to_json(r4)}, {"codim3", to_json(r3)}, {"codim2", to_json(r2)}};
  });
}

inline Criterion criterion_3() {
  return detail::timed(3, "chain vs closed form", 30.0, [](Criterion& c) {
    Sampler s(kVerifySeed + 3);
    int agree = 0;
    for (int k = 0; k < 50; ++k) {
      auto p = s.locus_point().params();
      auto a = cusp_report_closed(p), b = cusp_report_chain(p);
      if (a.d20 == b.d20 && a.d11 == b.d11 && a.M && b.M && *a.M == *b.M && a.N && b.N && *a.N == *b.N) ++agree;
    }
    int app = 0;
    for (int k = 0; k < 20; ++k) {
      std::map<std::pair<int, int>, Rational> A, B;
      auto rnd = [&] { return ratio(s.integer(-9, 9), s.integer(1, 7)); };
      for (int i = 0; i <= 5; ++i) A[{i, 0}] = rnd();
      A[{0, 1}] = ratio(s.integer(1, 9), s.integer(1, 7)) * (s.integer(0, 1) ? 1 : -1);
      A[{1, 1}] = rnd();
      for (int i = 0; i <= 5; ++i)
        for (int j = 0; j <= 2 && i + j <= 5; ++j) B[{i, j}] = rnd();
      Series2<Rational> f, g;
      for (auto& [k2, v] : A) f.set(k2.first, k2.second, v);
      for (auto& [k2, v] : B) g.set(k2.first, k2.second, v);
      auto vt = velocity_transform(f, g);
      auto C = appendix_c(A, B);
      bool all = C.size() == 15;
      for (auto& [key, v] : C) all = all && vt.g(key.first, key.second) == v;
      if (all) ++app;
    }
    c.pass = agree == 50 && app == 20;
    c.detail = std::to_string(agree) + "/50 locus points agree, " + std::to_string(app) + "/20 appendix instances exact";
    c.data = {{"locus_agree", agree}, {"appendix_agree", app}};
  });
}

inline Criterion criterion_4() {
  return detail::timed(4, "L11 polynomial identity", 60.0, [](Criterion& c) {
    Sampler s(kVerifySeed + 4);
    int agree = 0;
    for (int k = 0; k < 100; ++k) {
      auto [z, d, g, e] = s.omega_star();
      auto h = hopf_point(z, d, g, e);
      auto L = focal_numerators(h.z, h.delta, h.gamma, h.eta, 1);
      if (L[0] == L11_closed(z, d, g, e)) ++agree;
    }
    c.pass = agree == 100;
    c.detail = std::to_string(agree) + "/100 exact matches";
    c.data = {{"agree", agree}};
  });
}

inline Criterion criterion_5() {
  return detail::timed(5, "printed focal values", 600.0, [](Criterion& c) {
    struct Pt {
      Params<Rational> p;
      double L44;
      bool vanishing;
    };
    std::vector<Pt> pts{
        {{Rational(8, 625), Rational(19881, 781250), Rational(281, 50), Rational(1, 10), Rational(1, 50)},
         -128463.0 / 125000, true},
        {{Rational(1441, 5000), Rational(1507, 5000), Rational(103, 100), Rational(1, 10), Rational(1, 50)},
         100291.0 / 100000, false}};
    bool ok = true;
    std::ostringstream det;
    c.data = json::array();
    for (const auto& pt : pts) {
      auto roots = recover_z(pt.p.alpha, pt.p.gamma, pt.p.delta, pt.p.eta);
      if (roots.empty()) {
        ok = false;
        det << "no z root; ";
        continue;
      }
      // The root whose beta0 matches the supplied beta best.
      auto best = roots.front();
      for (auto& r : roots)
        if (std::abs(r.beta0 - pt.p.beta.get_d()) < std::abs(best.beta0 - pt.p.beta.get_d())) best = r;
      FocalReport rep;
      if (best.z.is_rational()) {
        auto h = hopf_point(best.z.rational_part(), pt.p.delta, pt.p.gamma, pt.p.eta);
        rep = focal_values(h, 4);
      } else {
        rep = focal_values_float<oct>(best.z.to<oct>(), from_rational<oct>(pt.p.delta),
                                      from_rational<oct>(pt.p.gamma), from_rational<oct>(pt.p.eta), 4);
      }
      const auto& L = rep.numerators_d;
      bool here = std::abs(L[3] - pt.L44) <= 1e-6 * std::abs(pt.L44);
      if (pt.vanishing) here = here && std::abs(L[0]) < 1e-9 && std::abs(L[1]) < 1e-9 && std::abs(L[2]) < 1e-9;
      ok = ok && here;
      det << "z=" << best.z.str() << " L=(" << detail::sci(L[0]) << "," << detail::sci(L[1]) << ","
          << detail::sci(L[2]) << "," << detail::sci(L[3]) << ") want L44=" << detail::sci(pt.L44) << "; ";
      c.data.push_back({{"params", params_json(pt.p)}, {"z", best.z.str()}, {"report", to_json(rep)},
                        {"expected_L44", pt.L44}});
    }
    c.pass = ok;
    c.detail = det.str();
  });
}

inline Criterion criterion_6() {
  return detail::timed(6, "resultant structure", 300.0, [](Criterion& c) {
    Sampler s(kVerifySeed + 6);
    int divides = 0;
    for (int k = 0; k < 20; ++k) {
      Rational z = s.between(Rational(1, 20), Rational(9, 20), 53);
      Rational d = s.between(Rational(1, 50), Rational(1, 4), 59);
      if (R1_of(z, d) == 0) {
        --k;
        continue;
      }
      if (prefactor_divisibility(z, d).divides()) ++divides;
    }
    auto cc = degenerate_center_check(Rational(1, 10));
    c.pass = divides == 20 && cc.passed();
    c.detail = std::to_string(divides) + "/20 exact divisions; at z*(1/10): res/normprod " + detail::sci(cc.relative[0]) +
               "," + detail::sci(cc.relative[1]) + "," + detail::sci(cc.relative[2]) + " root residual " +
               detail::sci(cc.root_residual[0]) + "," + detail::sci(cc.root_residual[1]) + "," +
               detail::sci(cc.root_residual[2]) + "; control residual " + detail::sci(cc.control_root_residual[0]) +
               "," + detail::sci(cc.control_root_residual[1]) + "," + detail::sci(cc.control_root_residual[2]);
    c.data = {{"divisions", divides},
              {"relative", cc.relative},
              {"root_residual", cc.root_residual},
              {"control_relative", cc.control_relative},
              {"control_root_residual", cc.control_root_residual}};
  });
}

inline Criterion criterion_7() {
  return detail::timed(7, "unfolding transversality", 60.0, [](Criterion& c) {
    auto u = unfolding_jacobian(Rational(3, 2));
    double chi = 0;
    for (const auto& v : u.chi0) chi = std::max(chi, std::abs(static_cast<double>(v)));
    c.pass = u.nonsingular() && chi < 1e-10;
    c.detail = "det=" + detail::sci(static_cast<double>(u.jac_det)) + " halving change " + detail::sci(u.relative_change()) +
               " max|chi(0)|=" + detail::sci(chi);
    c.data = to_json(u);
  });
}

struct HopfCrossCheck {
  double L1 = 0, c3 = 0;
  std::vector<LimitCycle> cycles;
  int attracting = 0, repelling = 0;
};

inline HopfCrossCheck hopf_cross_check(const HopfPoint<Rational>& h, double eps = 1e-3) {
  HopfCrossCheck out;
  out.L1 = focal_values(h, 1).values[0];
  Params<double> p = Params<Rational>{h.alpha0, h.beta0, h.gamma, h.delta, h.eta}.as<double>();
  State<double> c{h.z.get_d(), Rational(h.z + h.eta).get_d()};
  ReturnMap P(model_rhs(p), c, 0.0, {1e-13, 1e-13});
  std::vector<double> rs, ds;
  for (int i = 0; i < 10; ++i) {
    double r = 1e-3 * std::pow(10.0, i / 9.0);
    auto res = P(r);
    if (!res.returned) throw integration_error("no return near the weak focus");
    rs.push_back(r);
    ds.push_back(res.r - r);
  }
  out.c3 = fit_displacement_cubic(rs, ds)[0];
  Params<double> q = p;
  q.delta -= eps;  // raises the trace by eps
  std::vector<double> radii;
  for (int i = 1; i <= 60; ++i) radii.push_back(0.002 * i);
  auto scan = find_limit_cycles(q, c, 0.0, radii);
  out.cycles = scan.cycles;
  for (const auto& l : scan.cycles) (l.stability == CycleStability::Attracting ? out.attracting : out.repelling)++;
  return out;
}

inline Criterion criterion_8() {
  return detail::timed(8, "return map vs focal value", 120.0, [](Criterion& c) {
    auto h = presets::supercritical();
    auto r = hopf_cross_check(h);
    c.pass = r.L1 < 0 && r.c3 < 0 && r.attracting == 1 && r.repelling == 0;
    c.detail = "L1=" + detail::sci(r.L1) + " fitted c3=" + detail::sci(r.c3) + " cycles: " +
               std::to_string(r.attracting) + " attracting, " + std::to_string(r.repelling) + " repelling";
    json cyc = json::array();
    for (const auto& l : r.cycles) cyc.push_back(to_json(l));
    c.data = {{"L1", r.L1}, {"c3", r.c3}, {"cycles", cyc}};
  });
}

inline std::vector<State<double>> random_interior(Sampler& s, int n, double hi = 10) {
  std::vector<State<double>> v;
  for (int i = 0; i < n; ++i) {
    double x = s.uniform(0, hi), y = s.uniform(0, hi);
    if (x == 0 || y == 0) {
      --i;
      continue;
    }
    v.push_back({x, y});
  }
  return v;
}

inline Criterion criterion_9() {
  return detail::timed(9, "boundedness", 120.0, [](Criterion& c) {
    Sampler s(kVerifySeed + 9);
    std::vector<std::pair<std::string, Params<Rational>>> sets{
        {"extinction", presets::extinction()}, {"cusp4", presets::cusp4()}, {"weak_focus", presets::weak_focus()}};
    bool ok = true;
    std::ostringstream det;
    c.data = json::object();
    for (const auto& [name, p] : sets) {
      auto rep = check_boundedness(p.as<double>(), random_interior(s, 100), 500.0);
      int n = static_cast<int>(std::count(rep.entered_gamma_region.begin(), rep.entered_gamma_region.end(), true));
      ok = ok && n == 100;
      det << name << " " << n << "/100; ";
      c.data[name] = n;
    }
    c.pass = ok;
    c.detail = det.str();
  });
}

inline Criterion criterion_10() {
  return detail::timed(10, "cycles around the weak focus", 120.0, [](Criterion& c) {
    auto p = presets::weak_focus();
    State<double> centre{};
    bool found = false;
    for (const auto& e : positive_equilibria(p))
      if (e.name == "E2*") {
        centre = e.location();
        found = true;
      }
    if (!found) throw std::domain_error("E2* missing");
    std::vector<double> radii;
    for (int i = 1; i <= 40; ++i) radii.push_back(0.005 * i);
    auto scan = find_limit_cycles(p.as<double>(), centre, 0.0, radii);
    c.pass = !scan.cycles.empty();
    std::ostringstream det;
    det << "resolved " << scan.cycles.size() << " cycle(s):";
    json cyc = json::array();
    for (const auto& l : scan.cycles) {
      det << " r=" << std::setprecision(5) << l.radius
          << (l.stability == CycleStability::Attracting ? " attracting" : " repelling");
      cyc.push_back(to_json(l));
    }
    c.detail = det.str();
    c.data = {{"cycles", cyc}};
  });
}

inline Criterion run_criterion(int id) {
  switch (id) {
    case 1: return criterion_1();
    case 2: return criterion_2();
    case 3: return criterion_3();
    case 4: return criterion_4();
    case 5: return criterion_5();
    case 6: return criterion_6();
    case 7: return criterion_7();
    case 8: return criterion_8();
    case 9: return criterion_9();
    case 10: return criterion_10();
  }
  throw std::invalid_argument("no criterion " + std::to_string(id));
}

inline std::string format_line(const Criterion& c) {
  std::ostringstream os;
  os << (c.pass ? "PASS" : "FAIL") << "  criterion " << std::setw(2) << c.id << "  " << std::left << std::setw(30)
     << c.title << std::right << std::fixed << std::setprecision(3) << std::setw(9) << c.seconds << "s  " << c.detail;
  return os.str();
}

}  // namespace allee
