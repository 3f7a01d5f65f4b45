#include "allee/config.hpp"
#include "allee/report.hpp"
#include "cli_support.hpp"

#include <catch_amalgamated.hpp>

#include <sstream>

using namespace allee;
using namespace allee::cli;

namespace {

Config parse(const std::string& text) {
  std::istringstream in(text);
  return Config::parse(in, "test.toml");
}

}  // namespace

TEST_CASE("rational parsing", "[cli]") {
  CHECK(parse_rational("3/2") == ratio(3, 2));
  CHECK(parse_rational("-4/6") == ratio(-2, 3));
  CHECK(parse_rational("7") == 7);
  CHECK(parse_rational("010/3") == ratio(10, 3));
  CHECK_THROWS_AS(parse_rational("0.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/ 2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1e3"), std::invalid_argument);
}

TEST_CASE("exact mode rejects decimals", "[cli]") {
  CHECK(parse_exact("alpha", "1/10") == ratio(1, 10));
  CHECK_THROWS_AS(parse_exact("alpha", "0.1"), usage_error);
  CHECK_THROWS_WITH(parse_exact("alpha", "0.1"), Catch::Matchers::ContainsSubstring("decimals are rejected"));
}

TEST_CASE("lenient mode converts decimals exactly", "[cli]") {
  CHECK(parse_lenient("x", "0.1") == ratio(1, 10));
  CHECK(parse_lenient("x", "0.09") == ratio(9, 100));
  CHECK(parse_lenient("x", "-2.5e-3") == ratio(-1, 400));
  CHECK(parse_lenient("x", "3/4") == ratio(3, 4));
  CHECK(parse_lenient("x", "12") == 12);
  CHECK_THROWS_AS(parse_lenient("x", "abc"), usage_error);
  CHECK_THROWS_AS(parse_lenient("x", "1.2.3"), usage_error);
  CHECK_THROWS_AS(parse_lenient("x", "1e"), usage_error);
}

TEST_CASE("number lists", "[cli]") {
  auto v = split_numbers("0,0.6,0,0.9", 4, "--window");
  REQUIRE(v.size() == 4);
  CHECK(v[1] == 0.6);
  CHECK(v[3] == 0.9);
  CHECK(split_numbers("1/2,3", 0, "x") == std::vector<double>{0.5, 3.0});
  CHECK_THROWS_AS(split_numbers("1,2,3", 2, "--grid"), usage_error);
  CHECK_THROWS_AS(split_numbers("1,,2", 0, "x"), usage_error);
}

TEST_CASE("TOML sections and value types", "[cli][config]") {
  auto c = parse(R"(# comment
[model]
alpha = "1/2"   # trailing comment
gamma = 3

[solver]
horizon = 2.5e2
cycles = true
seeds = [1, 2.5, "x"]

[output]
json = false
)");
  CHECK(c.has_section("model"));
  CHECK(c.has_section("solver"));
  CHECK(c.has_section("output"));
  CHECK(c.get("model", "alpha")->raw() == "1/2");
  CHECK(c.get("model", "alpha")->is_string());
  CHECK(c.get("model", "gamma")->as_int() == 3);
  CHECK(c.get("solver", "horizon")->as_double() == 250);
  CHECK(c.get("solver", "cycles")->as_bool());
  CHECK(c.get("solver", "seeds")->items.size() == 3);
  CHECK_FALSE(c.get("output", "json")->as_bool());
  CHECK_FALSE(c.get("model", "beta"));
  CHECK_FALSE(c.get("nothere", "alpha"));
  CHECK_THROWS_AS(c.get("model", "alpha")->as_double(), config_error);
}

TEST_CASE("TOML errors", "[cli][config]") {
  CHECK_THROWS_AS(parse("[model\nalpha = 1"), config_error);
  CHECK_THROWS_AS(parse("[model]\nalpha"), config_error);
  CHECK_THROWS_AS(parse("[model]\nalpha = 1\nalpha = 2"), config_error);
  CHECK_THROWS_AS(parse("[model]\nalpha = \"1/2"), config_error);
  CHECK_THROWS_WITH(parse("[model]\nalpha = 1/2"), Catch::Matchers::ContainsSubstring("quote rationals"));
  CHECK_THROWS_WITH(parse("[model]\nalpha = 1/2"), Catch::Matchers::ContainsSubstring("test.toml:2"));
  CHECK_THROWS_AS(parse("[model]\nalpha = 1 2"), config_error);
  CHECK_THROWS_AS(Config::load("/nonexistent/file.toml"), config_error);
}

TEST_CASE("flags override config values", "[cli][config]") {
  std::optional<Config> cfg = parse("[model]\nalpha = \"1/2\"\nbeta = 0.25\n[solver]\nhorizon = 100\n");
  Resolver r(cfg);
  CHECK(*r.rational("model", "alpha", std::nullopt, true) == ratio(1, 2));
  CHECK(*r.rational("model", "alpha", std::string("3/4"), true) == ratio(3, 4));
  CHECK_FALSE(r.rational("model", "gamma", std::nullopt, true));
  CHECK_THROWS_AS(r.rational("model", "beta", std::nullopt, true), usage_error);
  CHECK(*r.rational("model", "beta", std::nullopt, false) == ratio(1, 4));
  CHECK(r.number("solver", "horizon", std::nullopt, 5) == 100);
  CHECK(r.number("solver", "horizon", 7.0, 5) == 7);
  CHECK(r.number("solver", "rmin", std::nullopt, 5) == 5);
  CHECK(r.integer("solver", "seed", std::nullopt, 9) == 9);
  CHECK(r.boolean("output", "json", false, false) == false);

  std::optional<Config> none;
  Resolver n(none);
  CHECK_FALSE(n.rational("model", "alpha", std::nullopt, true));
  CHECK(n.string("output", "svg", std::nullopt, "a.svg") == "a.svg");
}

TEST_CASE("JSON reports", "[cli]") {
  Params<Rational> p{ratio(1, 2), Rational(1), Rational(1), ratio(1, 2), ratio(1, 5)};
  auto j = params_json(p);
  CHECK(j["alpha"] == "1/2");
  CHECK(j["eta"] == "1/5");
  auto eqs = all_equilibria(p);
  auto e = to_json(eqs[0]);
  CHECK(e["name"] == "E0");
  CHECK(e["kind"] == "Saddle");
  CHECK(e["x"]["exact"] == "0");
  auto c = to_json(cusp_locus(ratio(3, 2), ratio(89, 361)));
  CHECK(c["alpha0"] == "49/361");
}
