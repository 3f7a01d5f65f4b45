#include "allee/equilibria.hpp"
#include "allee/simulate.hpp"
#include "allee/verify.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

using namespace allee;

namespace {

Rational q(long n, long d = 1) { return ratio(n, d); }

double dist(const Sample& s, const State<double>& c) { return std::hypot(s.x - c.x, s.y - c.y); }

}  // namespace

TEST_CASE("axes are invariant under integration", "[simulate]") {
  auto p = presets::extinction().as<double>();
  auto tx = integrate(p, {0.7, 0}, 100);
  for (const auto& s : tx.samples) CHECK(s.y == 0);
  auto ty = integrate(p, {0, 0.7}, 100);
  for (const auto& s : ty.samples) CHECK(s.x == 0);
  CHECK(std::abs(ty.samples.back().y - p.eta) < 1e-8);
}

TEST_CASE("positive equilibrium is stationary", "[simulate]") {
  Params<Rational> p{q(1, 5), q(1, 4), q(1, 2), q(1, 2), q(1, 10)};
  auto pos = positive_equilibria(p);
  REQUIRE(pos.size() == 2);
  for (const auto& e : pos) {
    REQUIRE(e.x.is_rational());
    auto tr = integrate(p.as<double>(), e.location(), 100);
    for (const auto& s : tr.samples) CHECK(dist(s, e.location()) < 1e-9);
  }
}

TEST_CASE("tightening tolerance converges", "[simulate]") {
  auto p = presets::cusp4().as<double>();
  State<double> s0{0.4, 0.6};
  auto a = integrate(p, s0, 50, {1e-7, 1e-7}).samples.back();
  auto b = integrate(p, s0, 50, {1e-10, 1e-10}).samples.back();
  auto c = integrate(p, s0, 50, {1e-12, 1e-12}).samples.back();
  double e1 = std::hypot(a.x - c.x, a.y - c.y), e2 = std::hypot(b.x - c.x, b.y - c.y);
  CHECK(e2 < 1e-7);
  CHECK(e2 <= e1);
}

TEST_CASE("uniform sampling grid", "[simulate]") {
  auto p = presets::extinction().as<double>();
  auto tr = integrate(p, {0.3, 0.3}, 10, {}, 0.5);
  REQUIRE(tr.samples.size() == 21);
  for (std::size_t i = 0; i < tr.samples.size(); ++i) CHECK(std::abs(tr.samples[i].t - 0.5 * i) < 1e-12);
}

TEST_CASE("integration preconditions", "[simulate]") {
  auto p = presets::extinction().as<double>();
  CHECK_THROWS_AS(integrate(p, {-0.1, 0.2}, 10), std::domain_error);
  CHECK_THROWS_AS(integrate(p, {0.1, 0.2}, 0), std::domain_error);
}

TEST_CASE("boundedness examples", "[simulate]") {
  auto p = presets::cusp4().as<double>();
  auto rep = check_boundedness(p, {{0.5, 0.5}, {3.0, 0.5}, {0.5, 4.0}}, 500);
  REQUIRE(rep.all_ok());
  CHECK(rep.entry_times[0] == 0);
  CHECK(rep.entry_times[1] > 0);
  CHECK(rep.entry_times[2] > 0);
  CHECK_THROWS_AS(check_boundedness(p, {{0, 0.5}}, 10), std::domain_error);
}

TEST_CASE("boundedness at five parameter sets", "[simulate][property]") {
  std::vector<Params<Rational>> sets{presets::extinction(), presets::cusp4(), presets::weak_focus(),
                                     Params<Rational>{q(1, 10), q(1, 100), q(1, 10), q(1, 10), q(1, 10)},
                                     Params<Rational>{q(1, 5), q(1, 4), q(1, 2), q(1, 2), q(1, 10)}};
  Sampler s(61);
  for (const auto& p : sets) {
    auto inits = random_interior(s, 30);
    auto rep = check_boundedness(p.as<double>(), inits, 500);
    CHECK(rep.all_ok());
  }
}

TEST_CASE("supercritical cycle is attracting with slope in (0,1)", "[simulate]") {
  auto h = presets::supercritical();
  auto p = Params<Rational>{h.alpha0, h.beta0, h.gamma, h.delta, h.eta}.as<double>();
  p.delta -= 1e-3;
  State<double> c{h.z.get_d(), Rational(h.z + h.eta).get_d()};
  std::vector<double> radii;
  for (int i = 1; i <= 60; ++i) radii.push_back(0.002 * i);
  auto scan = find_limit_cycles(p, c, 0.0, radii);
  REQUIRE(scan.cycles.size() == 1);
  const auto& lc = scan.cycles[0];
  CHECK(lc.stability == CycleStability::Attracting);
  CHECK(lc.floquet_slope > 0);
  CHECK(lc.floquet_slope < 1);
  CHECK(lc.period > 0);

  // Iterates from inside and outside approach the cycle.
  ReturnMap P(model_rhs(p), c, 0.0);
  for (double r0 : {0.5 * lc.radius, 1.5 * lc.radius}) {
    double r = r0;
    for (int k = 0; k < 200; ++k) {
      auto res = P(r);
      REQUIRE(res.returned);
      r = res.r;
    }
    CHECK(std::abs(r - lc.radius) < 1e-4 * 1.0);
    CHECK(std::abs(r - lc.radius) < std::abs(r0 - lc.radius));
  }
}

TEST_CASE("two-step return equals the composed map", "[simulate]") {
  auto h = presets::supercritical();
  auto p = Params<Rational>{h.alpha0, h.beta0, h.gamma, h.delta, h.eta}.as<double>();
  p.delta -= 1e-3;
  State<double> c{h.z.get_d(), Rational(h.z + h.eta).get_d()};
  Tolerance tol{1e-12, 1e-12};
  ReturnMap P(model_rhs(p), c, 0.0, tol);
  double r = 0.01;
  auto first = P(r);
  REQUIRE(first.returned);
  auto second = P(first.r);
  REQUIRE(second.returned);
  auto tr = integrate(p, P.point(r), first.period + second.period, tol);
  auto end = tr.samples.back();
  auto expect = P.point(second.r);
  CHECK(std::hypot(end.x - expect.x, end.y - expect.y) < 10 * 1e-9);
}

TEST_CASE("at least one cycle around E2* at the weak_focus parameters", "[simulate]") {
  auto c = criterion_10();
  CHECK(c.pass);
}

TEST_CASE("portrait: empty grid", "[simulate]") {
  auto d = phase_portrait(presets::extinction().as<double>(), {0, 1, 0, 1}, 0, 0, 10);
  CHECK(d.seeds.empty());
  CHECK_THROWS_AS(phase_portrait(presets::extinction().as<double>(), {1, 0, 0, 1}, 2, 2, 10), std::domain_error);
}

TEST_CASE("portrait: prey extinction when beta is large", "[simulate]") {
  auto p = presets::extinction();
  CHECK(p.beta > (1 + p.alpha) * (1 + p.alpha) / 4);
  auto pd = p.as<double>();
  auto d = phase_portrait(pd, {0, 1, 0, 1.2}, 4, 4, 300);
  REQUIRE(d.seeds.size() == 16);
  for (const auto& s : d.seeds) {
    REQUIRE(s.ok);
    auto end = s.traj.samples.back();
    CHECK(end.x < 1e-6);
    CHECK(std::abs(end.y - pd.eta) < 1e-3);
    for (const auto& v : s.traj.samples) {
      CHECK(v.x >= -1e-12);
      CHECK(v.y >= -1e-12);
    }
  }
}

TEST_CASE("portrait: seeds straddling the saddle separate", "[simulate]") {
  Params<Rational> p{q(1, 5), q(1, 4), q(1, 2), q(1, 2), q(1, 10)};
  auto pd = p.as<double>();
  auto pos = positive_equilibria(p);
  REQUIRE(pos.size() == 2);
  REQUIRE(pos[0].kind == Kind::Saddle);
  REQUIRE(pos[1].kind == Kind::StableFocus);
  auto sd = pos[0].location();
  auto J = jacobian(pd, sd);
  double tr = J[0][0] + J[1][1], dt = J[0][0] * J[1][1] - J[0][1] * J[1][0];
  double lu = tr / 2 + std::sqrt(tr * tr / 4 - dt);
  double ux = J[0][1], uy = lu - J[0][0];
  double n = std::hypot(ux, uy);
  const double eps = 1e-6;
  auto a = integrate(pd, {sd.x + eps * ux / n, sd.y + eps * uy / n}, 600).samples.back();
  auto b = integrate(pd, {sd.x - eps * ux / n, sd.y - eps * uy / n}, 600).samples.back();
  auto focus = pos[1].location();
  bool a_focus = std::hypot(a.x - focus.x, a.y - focus.y) < 1e-3, b_focus = std::hypot(b.x - focus.x, b.y - focus.y) < 1e-3;
  bool a_axis = a.x < 1e-3 && std::abs(a.y - pd.eta) < 1e-3, b_axis = b.x < 1e-3 && std::abs(b.y - pd.eta) < 1e-3;
  CHECK(((a_focus && b_axis) || (a_axis && b_focus)));
}

TEST_CASE("CSV and SVG output", "[simulate]") {
  auto pd = presets::extinction().as<double>();
  auto d = phase_portrait(pd, {0, 1, 0, 1.2}, 2, 2, 20, {1e-8, 1e-8}, 0.5,
                          {{"E0", {0, 0}, "Saddle"}, {"E1", {0, pd.eta}, "StableNode"}});
  std::ostringstream a, b;
  write_csv(a, d.seeds[0].traj);
  write_csv(b, d.seeds[0].traj);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("t,x,y\n", 0) == 0);
  auto svg = render_svg(d);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
  CHECK(svg.find(">E0<") != std::string::npos);
  CHECK(svg.find(">E1<") != std::string::npos);
}
