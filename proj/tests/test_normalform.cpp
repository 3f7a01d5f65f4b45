#include "allee/equilibria.hpp"
#include "allee/normalform.hpp"
#include "allee/verify.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace allee;

namespace {

Rational q(long n, long d = 1) { return ratio(n, d); }

}  // namespace

TEST_CASE("cusp locus at gamma = 3/2", "[normalform]") {
  auto c = cusp_locus(q(3, 2), q(89, 361));
  CHECK(c.alpha0 == q(49, 361));
  CHECK(c.beta0 == q(12250, 130321));
  CHECK(c.delta0 == q(63, 722));
  CHECK(c.eta0 == q(89, 361));
  CHECK(eta0_of(q(3, 2)) == q(89, 361));
  CHECK_THROWS_AS(cusp_locus(q(2), q(1, 2)), std::domain_error);
  CHECK_THROWS_AS(cusp_locus(q(2), q(3, 4)), std::domain_error);
}

TEST_CASE("locus points are nilpotent", "[normalform]") {
  Sampler s(41);
  for (int k = 0; k < 20; ++k) {
    auto p = s.locus_point().params();
    auto x0 = require_nilpotent(p);
    CHECK(x0 > 0);
    auto pos = positive_equilibria(p);
    REQUIRE(pos.size() == 1);
    CHECK(pos[0].kind == Kind::NilpotentCandidate);
  }
}

TEST_CASE("codimension ladder", "[normalform]") {
  auto r4 = cusp_report_closed(presets::cusp4());
  CHECK(r4.d11 == 0);
  REQUIRE(r4.M);
  CHECK(r4.M->is_zero());
  REQUIRE(r4.N);
  CHECK(!r4.N->is_zero());
  CHECK(r4.rho1 == 0);
  CHECK(r4.codim == 4);

  auto p3 = cusp_locus(q(3, 2), q(1, 10)).params();
  auto r3 = cusp_report_closed(p3);
  CHECK(r3.d11 == 0);
  CHECK(rho1_of(q(3, 2), q(1, 10)) != 0);
  REQUIRE(r3.M);
  CHECK(!r3.M->is_zero());
  CHECK(r3.codim == 3);

  // alpha < 1 and gamma < (1 - alpha)/(alpha + eta), off the d11 = 0 curve.
  auto p2 = nilpotent_point(q(1, 5), q(1, 2), q(1, 10));
  CHECK(p2.gamma < (1 - p2.alpha) / (p2.alpha + p2.eta));
  auto r2 = cusp_report_closed(p2);
  CHECK(r2.d20 != 0);
  CHECK(r2.d11 != 0);
  CHECK(r2.codim == 2);
  CHECK(!r2.M);
}

TEST_CASE("non-nilpotent points are rejected", "[normalform]") {
  Params<Rational> p{q(1, 10), q(1, 100), q(1, 10), q(1, 10), q(1, 10)};
  CHECK_THROWS_AS(cusp_report_closed(p), std::domain_error);
  CHECK_THROWS_AS(cusp_report_chain(p), std::domain_error);
}

TEST_CASE("chain and closed form agree on the locus", "[normalform][property]") {
  Sampler s(42);
  for (int k = 0; k < 10; ++k) {
    auto p = s.locus_point().params();
    auto a = cusp_report_closed(p), b = cusp_report_chain(p);
    CHECK(a.d20 == b.d20);
    CHECK(a.d11 == b.d11);
    REQUIRE(a.M);
    REQUIRE(b.M);
    CHECK(*a.M == *b.M);
    REQUIRE(a.N);
    REQUIRE(b.N);
    CHECK(*a.N == *b.N);
    CHECK(a.codim == b.codim);
  }
  auto f = cusp_report_chain(presets::cusp4());
  CHECK(f.M->is_zero());
  CHECK(*f.N == *cusp_report_closed(presets::cusp4()).N);
}

TEST_CASE("chain and closed form agree at generic nilpotent points", "[normalform]") {
  Sampler s(43);
  int seen = 0;
  for (int k = 0; k < 100 && seen < 10; ++k) {
    Params<Rational> p;
    try {
      p = nilpotent_point(s.between(q(0), q(1, 2)), s.between(q(0), q(2)), s.between(q(0), q(1, 4)));
    } catch (const std::domain_error&) {
      continue;
    }
    auto a = cusp_report_closed(p), b = cusp_report_chain(p);
    CHECK(a.d20 == b.d20);
    CHECK(a.d11 == b.d11);
    CHECK(a.codim == 2);
    ++seen;
  }
  CHECK(seen == 10);
}

TEST_CASE("w20 after the full chain", "[normalform]") {
  Sampler s(44);
  for (int k = 0; k < 5; ++k) {
    auto loc = s.locus_point();
    CuspChainTrace tr;
    cusp_report_chain(loc.params(), &tr);
    const Rational& g = loc.gamma;
    Rational expect = -g * g * g * (1 - g * loc.eta) / (2 * (1 + g) * (2 + 3 * g));
    CHECK(tr.w20 == expect);
    CHECK(tr.w20 < 0);
  }
}

TEST_CASE("linear stage has the nilpotent block", "[normalform]") {
  Sampler s(45);
  for (int k = 0; k < 5; ++k) {
    auto p = s.locus_point().params();
    CuspChainTrace tr;
    cusp_report_chain(p, &tr);
    CHECK(tr.linear.f(1, 0) == 0);
    CHECK(tr.linear.f(0, 1) == 1);
    CHECK(tr.linear.g(1, 0) == 0);
    CHECK(tr.linear.g(0, 1) == 0);
    CHECK(tr.quad.f(2, 0) == 0);
    CHECK(tr.quad.f(1, 1) == 0);
    CHECK(tr.quad.f(0, 2) == 0);
    CHECK(tr.quad.g(0, 2) == 0);
  }
}

TEST_CASE("linear-stage coefficients at random nilpotent points", "[normalform]") {
  Sampler s(49);
  int seen = 0;
  for (int k = 0; k < 100 && seen < 10; ++k) {
    Params<Rational> p;
    try {
      p = nilpotent_point(s.between(q(0), q(1, 2)), s.between(q(0), q(2)), s.between(q(0), q(1, 4)));
    } catch (const std::domain_error&) {
      continue;
    }
    CuspChainTrace tr;
    cusp_report_chain(p, &tr);
    const Rational &a = p.alpha, &g = p.gamma, &e = p.eta;
    Rational s1 = -1 + a + a * g + g * e, s2 = -1 + a + a * g - (2 + g) * e;
    CHECK(tr.linear.f(0, 2) == -4 * (1 + g) * (1 + g) / (g * s1 * s2));
    CHECK(tr.linear.f(1, 2) == -8 * pow(1 + g, 3) / (g * s1 * s2 * s2));
    CHECK(tr.linear.f(0, 3) == 16 * pow(1 + g, 4) / (g * g * s1 * s1 * s2 * s2));
    ++seen;
  }
  CHECK(seen == 10);
}

TEST_CASE("d11 vanishes identically at alpha0", "[normalform][property]") {
  Sampler s(46);
  for (int k = 0; k < 20; ++k) {
    auto loc = s.locus_point();
    CHECK(cusp_report_closed(loc.params()).d11 == 0);
  }
}

TEST_CASE("M vanishes exactly on the rho1 zero set", "[normalform][property]") {
  Sampler s(47);
  for (int k = 0; k < 10; ++k) {
    auto loc = s.locus_point();
    auto r = cusp_report_closed(loc.params());
    REQUIRE(r.M);
    CHECK(!r.M->is_zero());
    CHECK(rho1_of(loc.gamma, loc.eta) != 0);
  }
  for (long gn : {1L, 3L, 2L, 5L}) {
    Rational g = q(gn, 2);
    auto loc = cusp_locus(g, eta0_of(g));
    CHECK(rho1_of(g, loc.eta) == 0);
    CHECK(cusp_report_closed(loc.params()).M->is_zero());
    CHECK(cusp_report_chain(loc.params()).M->is_zero());
  }
}

TEST_CASE("appendix formula for c00", "[normalform]") {
  Sampler s(48);
  for (int k = 0; k < 10; ++k) {
    std::map<std::pair<int, int>, Rational> A, B;
    auto rnd = [&] { return q(s.integer(-9, 9), s.integer(1, 7)); };
    for (int i = 0; i <= 5; ++i) A[{i, 0}] = rnd();
    A[{0, 1}] = q(s.integer(1, 9), s.integer(1, 7));
    A[{1, 1}] = rnd();
    for (int i = 0; i <= 5; ++i)
      for (int j = 0; j <= 2 && i + j <= 5; ++j) B[{i, j}] = rnd();
    Series2<Rational> f, g;
    for (auto& [key, v] : A) f.set(key.first, key.second, v);
    for (auto& [key, v] : B) g.set(key.first, key.second, v);
    auto vt = velocity_transform(f, g);
    auto C = appendix_c(A, B);
    Rational a00 = A[{0, 0}], a01 = A[{0, 1}], b00 = B[{0, 0}], b01 = B[{0, 1}], b02 = B[{0, 2}];
    Rational c00 = a01 * b00 - a00 * b01 + a00 * a00 * b02 / a01;
    CHECK(C.at({0, 0}) == c00);
    CHECK(vt.g(0, 0) == c00);
    for (auto& [key, v] : C) CHECK(vt.g(key.first, key.second) == v);
  }
}

TEST_CASE("unfolding at the organizing centre", "[normalform]") {
  auto u = unfolding_jacobian(q(3, 2));
  for (const auto& c : u.chi0) CHECK(std::abs(static_cast<double>(c)) < 1e-10);
  CHECK(u.nonsingular());
  CHECK(std::abs(static_cast<double>(u.jac_det)) > 1e3 * 1e-6);
  CHECK(u.relative_change() < 0.01);

  auto base = unfolding_chi(q(3, 2), {0, 0, 0, 0});
  CHECK(std::abs(static_cast<double>(base.normal_form.g(2, 0)) - 1) < 1e-20);
  CHECK(std::abs(static_cast<double>(base.normal_form.g(4, 1)) + 1) < 1e-20);
  CHECK(std::abs(static_cast<double>(base.normal_form.f(0, 1)) - 1) < 1e-20);
}

TEST_CASE("unfolding rejects invalid gamma", "[normalform]") {
  CHECK_THROWS_AS(unfolding_jacobian(q(0)), std::domain_error);
}
