#include "allee/focal.hpp"
#include "allee/verify.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace allee;

namespace {

Rational q(long n, long d = 1) { return ratio(n, d); }

int sgn(double v) { return (v > 0) - (v < 0); }

}  // namespace

TEST_CASE("Hopf region membership", "[focal]") {
  auto h = hopf_point(q(1, 5), q(1, 20), q(1, 2), q(1, 10));
  CHECK(h.alpha0 > 0);
  CHECK(h.beta0 > 0);
  CHECK(h.d > 0);
  CHECK_THROWS_AS(hopf_point(q(1, 2), q(1, 20), q(1, 2), q(1, 10)), std::domain_error);
  CHECK_THROWS_WITH(hopf_point(q(1, 5), q(1, 2), q(1, 2), q(1, 10)),
                    Catch::Matchers::ContainsSubstring("delta < z(1-2z)/(2z+eta)"));
}

TEST_CASE("Hopf point is a weak focus", "[focal]") {
  Sampler s(51);
  for (int k = 0; k < 10; ++k) {
    auto [z, d, g, e] = s.omega_star();
    auto h = hopf_point(z, d, g, e);
    Params<Rational> p{h.alpha0, h.beta0, g, d, e};
    State<Rational> st{z, z + e};
    auto f = vector_field(p, st);
    CHECK(f.x == 0);
    CHECK(f.y == 0);
    auto J = jacobian(p, st);
    CHECK(trace(J) == 0);
    CHECK(det(J) > 0);
  }
}

TEST_CASE("z* surd", "[focal]") {
  auto z = z_star(q(1, 9));
  CHECK(z.is_rational());
  CHECK(z.rational_part() == q(1, 9));
  CHECK(R1_of(q(1, 9), q(1, 9)) == 0);
  Sampler s(52);
  for (int k = 0; k < 10; ++k) {
    Rational d = s.between(q(0), q(1, 2));
    QSurd zs = z_star(d);
    QSurd r1 = QSurd(q(2)) * zs * zs + QSurd(5 * d) * zs + QSurd(2 * d * d - d);
    CHECK(r1.is_zero());
    CHECK(zs.sign() > 0);
  }
  CHECK(z_star(q(1, 1000000)).to_double() < 1e-2);
  CHECK(z_star(q(1, 100000000)).to_double() < 1e-3);
  CHECK_THROWS_AS(z_star(q(1, 2)), std::domain_error);
  CHECK_THROWS_AS(z_star(q(0)), std::domain_error);
}

TEST_CASE("first focal numerator equals the closed form", "[focal][property]") {
  Sampler s(53);
  for (int k = 0; k < 25; ++k) {
    auto [z, d, g, e] = s.omega_star();
    auto L = focal_numerators(z, d, g, e, 1);
    CHECK(L[0] == L11_closed(z, d, g, e));
  }
}

TEST_CASE("focal values share the sign of their numerators", "[focal][property]") {
  Sampler s(54);
  for (int k = 0; k < 10; ++k) {
    auto [z, d, g, e] = s.omega_star();
    auto rep = focal_values(hopf_point(z, d, g, e), 3);
    REQUIRE(rep.values.size() == 3);
    for (int m = 0; m < 3; ++m) CHECK(sgn(rep.values[m]) == sgn(rep.numerators_d[m]));
    CHECK(rep.order == 1);
  }
  CHECK_THROWS_AS(focal_values(hopf_point(q(1, 5), q(1, 20), q(1, 2), q(1, 10)), 6), std::domain_error);
}

TEST_CASE("focal signs are invariant under coordinate scaling", "[focal][property]") {
  Sampler s(55);
  for (int k = 0; k < 5; ++k) {
    auto [z, d, g, e] = s.omega_star();
    auto base = focal_obstructions(z, d, g, e, 2);
    for (Rational c : {q(1, 3), q(2), q(7, 5)}) {
      auto scaled = focal_obstructions(z, d, g, e, 2, c);
      for (int m = 0; m < 2; ++m) {
        CHECK(sgn(scaled[m]) == sgn(base[m]));
        CHECK((scaled[m] == 0) == (base[m] == 0));
      }
    }
  }
}

TEST_CASE("float and exact engines agree", "[focal]") {
  Sampler s(56);
  for (int k = 0; k < 3; ++k) {
    auto [z, d, g, e] = s.omega_star();
    auto ex = focal_numerators(z, d, g, e, 3);
    auto fl = focal_numerators(from_rational<oct>(z), from_rational<oct>(d), from_rational<oct>(g),
                               from_rational<oct>(e), 3);
    for (int m = 0; m < 3; ++m) {
      double a = ex[m].get_d(), b = static_cast<double>(fl[m]);
      CHECK(std::abs(a - b) <= 1e-12 * std::max(std::abs(a), 1e-300));
    }
  }
}

TEST_CASE("z recovery from alpha", "[focal]") {
  auto roots = recover_z(q(8, 625), q(281, 50), q(1, 10), q(1, 50));
  REQUIRE(!roots.empty());
  bool found = false;
  for (const auto& r : roots)
    if (r.z.is_rational() && r.z.rational_part() == q(1, 10)) found = true;
  CHECK(found);
  auto h = hopf_point(q(1, 10), q(1, 10), q(281, 50), q(1, 50));
  CHECK(h.alpha0 == q(8, 625));
}

TEST_CASE("r12 vanishes on R1 = 0", "[focal]") {
  // delta = 1/9 puts z* = 1/9 at a rational point.
  auto t = focal_resultants(q(1, 9), q(1, 9), q(3), 2);
  CHECK(t.r12 == 0);
}

TEST_CASE("r12 is nonzero exactly when L11 and L22 share no eta root", "[focal]") {
  Rational z = q(1, 5), d = q(1, 20), g = q(1, 2);
  REQUIRE(R1_of(z, d) != 0);
  REQUIRE(R2_of(z, d, g) != 0);
  auto t = focal_resultants(z, d, g, 2);
  CHECK(t.r12 != 0);
  auto L1 = numerator_in_eta(from_rational<oct>(z), from_rational<oct>(d), from_rational<oct>(g), 1);
  auto L2 = numerator_in_eta(from_rational<oct>(z), from_rational<oct>(d), from_rational<oct>(g), 2);
  for (const auto& r : real_roots_quadratic(L1)) CHECK(relative_residual_at(L2, r) > 1e-8);
}

TEST_CASE("r12 is divisible by the prefactor", "[focal]") {
  for (auto [z, d] : std::vector<std::pair<Rational, Rational>>{{q(1, 5), q(1, 20)}, {q(3, 10), q(1, 7)}}) {
    auto dv = prefactor_divisibility(z, d);
    CHECK(dv.divides());
    CHECK(dv.remainder.is_zero());
    CHECK(dv.quotient.degree() == dv.r12.degree() - dv.prefactor.degree());
  }
}

TEST_CASE("resultants degenerate at z*", "[focal]") {
  auto cc = degenerate_center_check(q(1, 10));
  CHECK(cc.passed());
  for (int i = 0; i < 3; ++i) {
    CHECK(cc.relative[i] < 1e-8);
    CHECK(cc.root_residual[i] < 1e-8);
    CHECK(cc.control_root_residual[i] > 1e-8);
  }
}

TEST_CASE("supercritical point: return map agrees with L1", "[focal][simulate]") {
  auto r = hopf_cross_check(presets::supercritical());
  CHECK(r.L1 < 0);
  CHECK(r.c3 < 0);
  CHECK(r.attracting == 1);
  CHECK(r.repelling == 0);
}
