#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "caplab/errors.hpp"
#include "caplab/physics.hpp"
#include "caplab/reaction.hpp"

using namespace caplab;

namespace {

// setup realizing a prescribed bond parameter b with angle theta:
// rho - rho0 = b, sigma = 1, g = 1
CapillarySetup dimensionless(double b, double theta) {
  CapillarySetup c;
  c.rho = b + 1.0;
  c.rho0 = 1.0;
  c.sigma = 1.0;
  c.g = 1.0;
  c.theta = theta;
  return c;
}

}  // namespace

TEST_CASE("derived parameters at the reference angle") {
  CapillarySetup c = dimensionless(1.0, M_PI / 4.0);
  CHECK(bond_parameter(c) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(contact_slope(c) == doctest::Approx(-1.0).epsilon(1e-14));
  // c_h = sqrt(2 (1 - sin(pi/4))) = sqrt(2 - sqrt 2)
  CHECK(rise_coefficient(c) ==
        doctest::Approx(std::sqrt(2.0 - std::sqrt(2.0))).epsilon(1e-14));
}

TEST_CASE("rise coefficient against a maximization oracle") {
  // the primitive F0 + b v (c_h - v/2) is a downward parabola whose apex
  // just touches zero, so the level is tangential: the oracle locates the
  // maximizer by golden-section search and checks the maximum vanishes
  CapillarySetup c = dimensionless(1.0, M_PI / 4.0);
  ReactionTerm r = to_reaction(c);
  REQUIRE(r.L.has_value());
  double b = bond_parameter(c), ch = rise_coefficient(c);
  double F0 = r.F0();
  auto F = [&](double v) { return F0 + b * v * (ch - 0.5 * v); };
  double lo = 0.0, hi = 1.5;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  for (int i = 0; i < 200; ++i) {
    if (F(x1) < F(x2)) { lo = x1; x1 = x2; x2 = lo + gr * (hi - lo); }
    else { hi = x2; x2 = x1; x1 = hi - gr * (hi - lo); }
  }
  double apex = 0.5 * (lo + hi);
  CHECK(std::abs(F(apex)) <= 1e-12);
  CHECK(*r.L == doctest::Approx(apex).epsilon(1e-6));
  CHECK(*r.L == doctest::Approx(ch).epsilon(1e-6));
}

TEST_CASE("plate rise height cross-checks the integrated profile") {
  CapillarySetup c = dimensionless(1.0, M_PI / 4.0);
  RiseHeight rh = plate_rise_height(c);
  CHECK(rh.height == doctest::Approx(std::sqrt(2.0 - std::sqrt(2.0))).epsilon(1e-12));
  CHECK(rh.discrepancy <= 1e-4);
  CHECK(std::abs(rh.height - rh.profile_terminal) == doctest::Approx(rh.discrepancy));
}

TEST_CASE("rise height scales like b^(-1/2) over three decades") {
  double h01 = plate_rise_height(dimensionless(0.1, M_PI / 4.0)).height;
  double h1 = plate_rise_height(dimensionless(1.0, M_PI / 4.0)).height;
  double h10 = plate_rise_height(dimensionless(10.0, M_PI / 4.0)).height;
  double slope_lo = std::log(h1 / h01) / std::log(1.0 / 0.1);
  double slope_hi = std::log(h10 / h1) / std::log(10.0 / 1.0);
  CHECK(slope_lo == doctest::Approx(-0.5).epsilon(0.01));
  CHECK(slope_hi == doctest::Approx(-0.5).epsilon(0.01));
}

TEST_CASE("rise height decreases with the wetting angle and vanishes at pi/2") {
  double prev = 1e300;
  for (double theta : {0.2, 0.5, 1.0, 1.4}) {
    double h = plate_rise_height(dimensionless(1.0, theta)).height;
    CHECK(h < prev);
    CHECK(h > 0.0);
    prev = h;
  }
  RiseHeight flat = plate_rise_height(dimensionless(1.0, M_PI / 2.0));
  CHECK(flat.height == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("reaction derived from the setup passes admissibility") {
  ReactionTerm r = to_reaction(dimensionless(1.0, M_PI / 4.0));
  CHECK(check_admissibility(r).admissible());
  // steeper angle, heavier liquid
  ReactionTerm r2 = to_reaction(dimensionless(5.0, 0.3));
  CHECK(check_admissibility(r2).admissible());
}

TEST_CASE("validation rejects unphysical setups") {
  CapillarySetup c = dimensionless(1.0, M_PI / 4.0);
  CapillarySetup bad;

  bad = c; bad.theta = 0.0;
  CHECK_THROWS_AS(validate(bad), Error);
  bad = c; bad.theta = M_PI / 2.0 + 0.1;
  CHECK_THROWS_AS(validate(bad), Error);
  bad = c; bad.sigma = 0.0;
  CHECK_THROWS_AS(validate(bad), Error);
  bad = c; bad.g = -9.81;
  CHECK_THROWS_AS(validate(bad), Error);
  bad = c; bad.rho0 = bad.rho + 1.0;  // gas denser than liquid
  CHECK_THROWS_AS(validate(bad), Error);

  // flat contact is valid for the rise height but has no reaction term
  CapillarySetup flat = dimensionless(1.0, M_PI / 2.0);
  validate(flat);
  CHECK_THROWS_AS(to_reaction(flat), Error);
}
