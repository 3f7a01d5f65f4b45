#include "allee/surd.hpp"
#include "allee/series2.hpp"
#include "allee/unipoly.hpp"
#include "allee/verify.hpp"

#include <catch_amalgamated.hpp>

using namespace allee;
using S = Series2<Rational>;
using P = UniPoly<Rational>;

namespace {

Rational q(long n, long d = 1) { return ratio(n, d); }

S random_series(Sampler& rng, int n, bool constant_term = true) {
  S s(n);
  for (int d = constant_term ? 0 : 1; d <= n; ++d)
    for (int i = 0; i <= d; ++i)
      if (rng.integer(0, 2)) s.set(i, d - i, q(rng.integer(-9, 9), rng.integer(1, 7)));
  return s;
}

P random_poly(Sampler& rng, int deg) {
  std::vector<Rational> c;
  for (int k = 0; k <= deg; ++k) c.push_back(q(rng.integer(-6, 6), rng.integer(1, 5)));
  if (c.back() == 0) c.back() = 1;
  return P(c);
}

}  // namespace

TEST_CASE("series addition", "[algebra]") {
  auto x = S::x(), y = S::y();
  CHECK((x + y) + (x - y) == x * q(2));
  Sampler rng(1);
  auto s = random_series(rng, 5);
  CHECK(S(5) + s == s);
  CHECK(S::monomial(2, 0, q(1, 2)) + S::monomial(2, 0, q(1, 3)) == S::monomial(2, 0, q(5, 6)));
  CHECK_THROWS_AS(S(3) + S(5), std::invalid_argument);
}

TEST_CASE("series multiplication and truncation", "[algebra]") {
  auto x = S::x(), y = S::y();
  CHECK(x * y == S::monomial(1, 1, q(1)));
  S sq = (x + y) * (x + y);
  CHECK(sq == S::monomial(2, 0, q(1)) + S::monomial(1, 1, q(2)) + S::monomial(0, 2, q(1)));
  CHECK((S::monomial(2, 0, q(1), 2) * S::y(2)).is_zero());
}

TEST_CASE("ring axioms hold exactly", "[algebra][property]") {
  Sampler rng(11);
  for (int k = 0; k < 25; ++k) {
    auto a = random_series(rng, 5), b = random_series(rng, 5), c = random_series(rng, 5);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    CHECK(a + b == b + a);
  }
}

TEST_CASE("substitution", "[algebra]") {
  auto X = S::x(), Y = S::y();
  S s = S::monomial(2, 0, q(1));
  CHECK(subst(s, X + Y, Y) == (X + Y) * (X + Y));
  CHECK(subst(S::monomial(1, 1, q(1)), X, X) == S::monomial(2, 0, q(1)));
  CHECK_THROWS_AS(subst(s, X + q(1), Y), std::domain_error);
  CHECK(subst(s, X + q(1), Y, true) == X * X + X * q(2) + q(1));
}

TEST_CASE("substitution is functorial", "[algebra][property]") {
  Sampler rng(12);
  for (int k = 0; k < 10; ++k) {
    auto s = random_series(rng, 5);
    auto u1 = random_series(rng, 5, false), u2 = random_series(rng, 5, false);
    auto v1 = random_series(rng, 5, false), v2 = random_series(rng, 5, false);
    S lhs = subst(subst(s, u1, u2), v1, v2);
    S rhs = subst(s, subst(u1, v1, v2), subst(u2, v1, v2));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("vector field transforms", "[algebra]") {
  auto X = S::x(), Y = S::y();
  Sampler rng(13);
  auto f = random_series(rng, 5, false), g = random_series(rng, 5, false);

  auto id = vf_transform(f, g, X, Y);
  CHECK(id.f == f);
  CHECK(id.g == g);

  auto sw = vf_transform(f, g, Y, X);
  CHECK(sw.f == subst(g, Y, X));
  CHECK(sw.g == subst(f, Y, X));

  CHECK_THROWS_AS(vf_transform(f, g, X + Y, X + Y), std::domain_error);
}

TEST_CASE("vector field transform then inverse is the identity", "[algebra][property]") {
  auto X = S::x(), Y = S::y();
  Sampler rng(14);
  for (int k = 0; k < 10; ++k) {
    auto f = random_series(rng, 5, false), g = random_series(rng, 5, false);
    Rational a = q(rng.integer(1, 5), 3), b = q(rng.integer(-5, 5), 4);
    S c2 = S::monomial(2, 0, q(rng.integer(-5, 5), 2)), c3 = S::monomial(1, 1, q(rng.integer(-5, 5), 3));
    // Triangular near-identity map and its exact inverse within the cutoff.
    S xs = X * a + c2;
    S ys = Y + X * b + c3;
    S xi = X * (1 / a);
    for (int it = 0; it < 5; ++it) xi = (X - subst(c2, xi, Y)) * (1 / a);
    S yi = Y - xi * b - subst(c3, xi, Y);
    for (int it = 0; it < 5; ++it) yi = Y - xi * b - subst(c3, xi, yi);
    REQUIRE(subst(xs, xi, yi) == X);
    REQUIRE(subst(ys, xi, yi) == Y);
    auto fwd = vf_transform(f, g, xs, ys);
    auto back = vf_transform(fwd.f, fwd.g, xi, yi);
    CHECK(back.f == f);
    CHECK(back.g == g);
  }
}

TEST_CASE("time rescaling", "[algebra]") {
  auto X = S::x(), Y = S::y();
  auto f = Y, g = X * X;
  auto one = time_rescale(f, g, S::constant(q(1)));
  CHECK(one.f == f);
  CHECK(one.g == g);
  auto two = time_rescale(f, g, S::constant(q(2)));
  CHECK(two.f == f * q(2));
  CHECK(two.g == g * q(2));
  auto lin = time_rescale(f, g, X + q(1));
  CHECK(lin.f == Y + X * Y);
  CHECK(lin.g == X * X + X * X * X);
  CHECK_THROWS_AS(time_rescale(f, g, X), std::domain_error);
}

TEST_CASE("series JSON round trip", "[algebra]") {
  Sampler rng(15);
  auto s = random_series(rng, 5);
  auto j = to_json(s);
  CHECK(j["max_degree"] == 5);
  CHECK(series_from_json(j) == s);
}

TEST_CASE("resultant examples", "[algebra]") {
  P xm1({q(-1), q(1)}), xp1({q(1), q(1)});
  CHECK(resultant(xm1, xp1) == 2);
  P f({q(-1), q(0), q(1)}), g({q(-2), q(1)});
  CHECK(resultant(f, g) == 3);
  CHECK(determinant(sylvester_matrix(f, g)) == 3);
  CHECK(resultant(f, f) == 0);
  CHECK_THROWS(resultant(P::constant(q(2)), P::constant(q(3))));
}

TEST_CASE("resultant antisymmetry and multiplicativity", "[algebra][property]") {
  Sampler rng(16);
  for (int k = 0; k < 20; ++k) {
    auto f = random_poly(rng, static_cast<int>(rng.integer(1, 4)));
    auto g = random_poly(rng, static_cast<int>(rng.integer(1, 4)));
    auto h = random_poly(rng, static_cast<int>(rng.integer(1, 3)));
    int sgn = (f.degree() * g.degree()) % 2 ? -1 : 1;
    CHECK(resultant(f, g) == sgn * resultant(g, f));
    CHECK(resultant(f, g * h) == resultant(f, g) * resultant(f, h));
  }
}

TEST_CASE("resultant vanishes exactly when a common factor exists", "[algebra][property]") {
  Sampler rng(17);
  for (int k = 0; k < 30; ++k) {
    auto f = random_poly(rng, static_cast<int>(rng.integer(1, 3)));
    auto g = random_poly(rng, static_cast<int>(rng.integer(1, 3)));
    if (k % 2) {
      auto common = random_poly(rng, 1);
      f = f * common;
      g = g * common;
    }
    bool shared = gcd(f, g).degree() > 0;
    CHECK((resultant(f, g) == 0) == shared);
  }
}

TEST_CASE("rational to double rounds to nearest", "[algebra]") {
  CHECK(nearest_double(ratio(9, 10)) == 0.9);
  CHECK(nearest_double(ratio(1, 3)) == 1.0 / 3.0);
  CHECK(nearest_double(ratio(-7, 10)) == -0.7);
  CHECK(to_double(ratio(3, 5)) == 0.6);
  CHECK(from_rational<double>(ratio(2, 7)) == 2.0 / 7.0);
}

TEST_CASE("surd radicands are reduced", "[algebra]") {
  QSurd a(Rational(2, 5), Rational(-1, 2), Rational(11, 25));
  CHECK(a.radicand() == 11);
  CHECK(a.surd_coeff() == ratio(-1, 10));
  CHECK(a.str() == "2/5 - 1/10*sqrt(11)");
  QSurd b(0, 1, Rational(1, 2));
  CHECK(b.radicand() == 2);
  CHECK(b.surd_coeff() == ratio(1, 2));
  CHECK((b * b).is_rational());
  CHECK((b * b).rational_part() == ratio(1, 2));
  CHECK_NOTHROW(QSurd(0, 1, Rational(8)) + QSurd(0, 1, Rational(2)));
}
