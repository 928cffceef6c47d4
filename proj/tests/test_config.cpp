#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "caplab/config.hpp"
#include "caplab/errors.hpp"
#include "caplab/reaction.hpp"

using namespace caplab;
using nlohmann::json;

TEST_CASE("defaults populate a fully usable run") {
  RunConfig c = parse_config(json::object());
  CHECK(c.kappa == -1.0);
  CHECK(c.radii == std::vector<double>{25.0, 50.0, 100.0});
  CHECK(c.grid_h == 0.025);
  CHECK(c.dimension == 2);
  CHECK(c.tolerances == default_tolerances());
  ReactionTerm r = c.make_reaction_term();
  CHECK(check_admissibility(r).admissible());
}

TEST_CASE("tolerance lookup is strict about names") {
  RunConfig c = parse_config(json::object());
  CHECK(c.tolerance("modica-bound") == 1e-9);
  CHECK(c.tolerance("pohozaev-normalized-residual") == 1e-4);
  CHECK_THROWS_AS(c.tolerance("no-such-check"), Error);
}

TEST_CASE("overrides are honored, unknown tolerance names rejected") {
  json j = {{"kappa", -2.0},
            {"radii", {10.0, 20.0}},
            {"grid_h", 0.05},
            {"tolerances", {{"modica-bound", 1e-7}}}};
  RunConfig c = parse_config(j);
  CHECK(c.kappa == -2.0);
  CHECK(c.radii.size() == 2);
  CHECK(c.tolerance("modica-bound") == 1e-7);
  CHECK(c.tolerance("hamiltonian-drift") == 1e-8);  // untouched default

  json bad = {{"tolerances", {{"modika-bound", 1e-7}}}};
  CHECK_THROWS_AS(parse_config(bad), Error);
}

TEST_CASE("structural validation") {
  CHECK_THROWS_AS(parse_config(json::array()), Error);
  CHECK_THROWS_AS(parse_config(json{{"kappa", 1.0}}), Error);
  CHECK_THROWS_AS(parse_config(json{{"radii", json::array()}}), Error);
  CHECK_THROWS_AS(parse_config(json{{"radii", {50.0, 25.0}}}), Error);
  CHECK_THROWS_AS(parse_config(json{{"radii", {-5.0, 25.0}}}), Error);
  CHECK_THROWS_AS(parse_config(json{{"grid_h", 0.0}}), Error);
  CHECK_THROWS_AS(parse_config(json{{"dimension", 1}}), Error);
  CHECK_THROWS_AS(parse_config(json{{"search", {0.1, 1.5}}}), Error);
  CHECK_THROWS_AS(parse_config(json{{"search", {-0.25}}}), Error);
}

TEST_CASE("linear reaction derives the zero level from kappa") {
  json decl = {{"type", "linear"}, {"b", 1.0}};
  ReactionTerm r = reaction_from_json(decl, -1.0, -0.25, 1.5);
  REQUIRE(r.L.has_value());
  // F0 = 1/sqrt(2) - 1 and c_h = sqrt(-2 F0 / b) closes F(c_h) = 0
  double ch = std::sqrt(-2.0 * (1.0 / std::sqrt(2.0) - 1.0));
  CHECK(*r.L == doctest::Approx(ch).epsilon(1e-9));

  json with_ch = {{"type", "linear"}, {"b", 1.0}, {"c_h", 0.9}};
  ReactionTerm r2 = reaction_from_json(with_ch, -1.0, -0.25, 1.5);
  CHECK(r2.f(0.0) == doctest::Approx(0.9).epsilon(1e-14));

  json bad_b = {{"type", "linear"}, {"b", -1.0}};
  CHECK_THROWS_AS(reaction_from_json(bad_b, -1.0, -0.25, 1.5), Error);
}

TEST_CASE("expression reaction differentiates symbolically") {
  // c_h = sqrt(2 - sqrt 2) written symbolically keeps full precision
  double ch = std::sqrt(2.0 - std::sqrt(2.0));
  json decl = {{"type", "expression"}, {"f", "sqrt(2 - sqrt(2)) - u"}};
  ReactionTerm r = reaction_from_json(decl, -1.0, -0.25, 1.5);
  CHECK(r.f(0.3) == doctest::Approx(ch - 0.3).epsilon(1e-12));
  CHECK(r.f_prime(0.3) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(check_admissibility(r).admissible());

  CHECK_THROWS_AS(reaction_from_json(json{{"type", "expression"}}, -1.0, -0.25, 1.5), Error);
  json bad = {{"type", "expression"}, {"f", "2 +"}};
  CHECK_THROWS_AS(reaction_from_json(bad, -1.0, -0.25, 1.5), Error);
}

TEST_CASE("table reaction fits the samples monotonically") {
  // tabulate the linear capillary term; the monotone fit must reproduce it
  double ch = std::sqrt(2.0 - std::sqrt(2.0));
  json u = json::array(), f = json::array();
  for (int i = 0; i <= 40; ++i) {
    double v = -0.25 + 1.75 * i / 40.0;
    u.push_back(v);
    f.push_back(ch - v);
  }
  json decl = {{"type", "table"}, {"u", u}, {"f", f}};
  ReactionTerm r = reaction_from_json(decl, -1.0, -0.25, 1.5);
  for (double v : {-0.1, 0.0, 0.33, 0.7, 1.2})
    CHECK(r.f(v) == doctest::Approx(ch - v).epsilon(1e-9));
  CHECK(check_admissibility(r).admissible());

  json mismatched = {{"type", "table"}, {"u", {0.0, 1.0}}, {"f", {1.0}}};
  CHECK_THROWS_AS(reaction_from_json(mismatched, -1.0, -0.25, 1.5), Error);
}

TEST_CASE("unknown reaction type is rejected") {
  CHECK_THROWS_AS(reaction_from_json(json{{"type", "quadratic"}}, -1.0, -0.25, 1.5), Error);
  CHECK_THROWS_AS(reaction_from_json(json::array(), -1.0, -0.25, 1.5), Error);
}

TEST_CASE("file loading distinguishes missing, malformed, and valid input") {
  CHECK_THROWS_AS(load_config("definitely_not_here.json"), Error);

  std::string bad_path = "config_test_bad.json";
  { std::ofstream os(bad_path); os << "{ not json"; }
  CHECK_THROWS_AS(load_config(bad_path), Error);
  std::remove(bad_path.c_str());

  std::string good_path = "config_test_good.json";
  { std::ofstream os(good_path); os << R"({"kappa": -1.5, "grid_h": 0.1})"; }
  RunConfig c = load_config(good_path);
  CHECK(c.kappa == -1.5);
  CHECK(c.grid_h == 0.1);
  std::remove(good_path.c_str());
}

TEST_CASE("error kinds map to distinct exit semantics") {
  try {
    parse_config(json{{"kappa", 1.0}});
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
  }
}
