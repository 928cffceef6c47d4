#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "caplab/errors.hpp"
#include "caplab/profile.hpp"
#include "caplab/radial.hpp"
#include "caplab/reaction.hpp"

using namespace caplab;

namespace {

TruncatedReaction capillary_truncation() {
  double ch = std::sqrt(2.0 * (1.0 - 1.0 / std::sqrt(2.0)));
  ReactionTerm r = make_reaction([=](double v) { return ch - v; },
                                 [](double) { return -1.0; }, -1.0, -0.25, 1.5);
  return truncate(r, 0.1);
}

}  // namespace

TEST_CASE("minimizer property against random admissible perturbations") {
  TruncatedReaction tr = capillary_truncation();
  double R = 25.0;
  RadialSolution s = minimize_energy(tr, R, 2, 501, 1.0);
  double E = discrete_energy(tr, s.u, R, 2);
  CHECK(E == doctest::Approx(s.energy).epsilon(1e-12));

  std::mt19937 rng(17);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v = s.u;
    double amp = (trial % 2 == 0) ? 1e-3 : 5e-2;
    for (size_t i = 0; i + 1 < v.size(); ++i) v[i] += amp * U(rng);
    v.back() = 0.0;  // Dirichlet condition preserved
    CHECK(discrete_energy(tr, v, R, 2) >= E - 1e-12 * (1.0 + std::abs(E)));
  }
}

TEST_CASE("pointwise bounds and gradient cap") {
  TruncatedReaction tr = capillary_truncation();
  RadialSolution s = minimize_energy(tr, 25.0, 2, 1001, 1.0);
  double L = tr.L(), d = tr.delta();
  double cap = 1.0 / std::pow(tr.inf_F_tilde() + 1.0, 2) - 1.0;
  for (size_t i = 0; i < s.u.size(); ++i) {
    CHECK(s.u[i] > -d);
    CHECK(s.u[i] < L);
  }
  CHECK(s.max_grad_sq <= cap + 1e-8);
  CHECK(s.u.back() == 0.0);
  CHECK_FALSE(s.grad_bound_violated_on_path);
}

TEST_CASE("flux-form residual matches the Newton tolerance, expanded form is O(h^2)") {
  TruncatedReaction tr = capillary_truncation();
  RadialSolution s1 = minimize_energy(tr, 25.0, 2, 501, 1.0);
  RadialSolution s2 = minimize_energy(tr, 25.0, 2, 1001, 1.0);
  CHECK(radial_residual(s1) <= 1e-9);
  CHECK(radial_residual(s2) <= 1e-9);
  double e1 = radial_residual_expanded(s1);
  double e2 = radial_residual_expanded(s2);
  CHECK(e1 > radial_residual(s1));
  // halving h shrinks the consistency gap by about 4; accept >= 3
  CHECK(e1 / e2 >= 3.0);
}

TEST_CASE("energy decreases along the epsilon continuation endpoint") {
  // the eps = 0 energy of the final iterate must not exceed the eps = 0
  // energy of the cone and zero starting guesses
  TruncatedReaction tr = capillary_truncation();
  RadialSolution s = minimize_energy(tr, 25.0, 2, 501, 1.0);
  CHECK(s.energy <= s.energy_cone_start + 1e-9);
  CHECK(s.energy <= s.energy_zero_start + 1e-9);
  REQUIRE(!s.epsilon_path.empty());
  for (size_t i = 1; i < s.epsilon_path.size(); ++i)
    CHECK(s.epsilon_path[i] < s.epsilon_path[i - 1]);
  CHECK(s.epsilon_path.back() == 0.0);
}

TEST_CASE("solution is deterministic") {
  TruncatedReaction tr = capillary_truncation();
  RadialSolution a = minimize_energy(tr, 25.0, 2, 501, 1.0);
  RadialSolution b = minimize_energy(tr, 25.0, 2, 501, 1.0);
  REQUIRE(a.u.size() == b.u.size());
  for (size_t i = 0; i < a.u.size(); ++i) CHECK(a.u[i] == b.u[i]);
}

TEST_CASE("zero mode minimizer is identically zero with energy |B_R|") {
  TruncatedReaction z = TruncatedReaction::zero(0.8);
  double R = 10.0;
  RadialSolution s = minimize_energy(z, R, 2, 401, 1.0);
  for (double v : s.u) CHECK(std::abs(v) <= 1e-10);
  CHECK(s.energy == doctest::Approx(M_PI * R * R).epsilon(1e-10));
}

TEST_CASE("level set localization near the boundary") {
  TruncatedReaction tr = capillary_truncation();
  RadialSolution s = minimize_energy(tr, 50.0, 2, 2001, 1.0);
  Localization loc = level_set_localization(s, tr.L() / 2.0);
  CHECK_FALSE(loc.degenerate);
  CHECK(loc.width > 0.0);
  CHECK(loc.width < 5.0);  // the {u < L/2} collar hugs the boundary
}

TEST_CASE("potential integral is nonpositive and O(R)") {
  TruncatedReaction tr = capillary_truncation();
  double p25, p50;
  {
    RadialSolution s = minimize_energy(tr, 25.0, 2, 1001, 1.0);
    p25 = potential_integral(s);
  }
  {
    RadialSolution s = minimize_energy(tr, 50.0, 2, 2001, 1.0);
    p50 = potential_integral(s);
  }
  CHECK(p25 <= 1e-9);
  CHECK(p50 <= 1e-9);
  // boundary-layer scaling: the ratio tracks the perimeter ratio, not the area
  CHECK(std::abs(p50 / p25) < 3.0);
  CHECK(std::abs(p50 / p25) > 1.5);
}

TEST_CASE("interpolants agree with the stored nodes") {
  TruncatedReaction tr = capillary_truncation();
  RadialSolution s = minimize_energy(tr, 25.0, 2, 501, 1.0);
  for (size_t i = 0; i < s.r.size(); i += 41) {
    CHECK(s.u_at(s.r[i]) == doctest::Approx(s.u[i]).epsilon(1e-13));
    CHECK(s.u_prime_at(s.r[i]) == doctest::Approx(s.u_prime[i]).epsilon(1e-13));
  }
  CHECK(s.u_prime.front() == 0.0);  // radial symmetry at the origin
}

TEST_CASE("convergence check requires at least three radii") {
  TruncatedReaction tr = capillary_truncation();
  ProfileSolution p = profile_by_quadrature(tr.base(), 0.99, 513);
  std::vector<RadialSolution> sweep;
  sweep.push_back(minimize_energy(tr, 25.0, 2, 501, 1.0));
  CHECK_THROWS_AS(convergence_to_profile(sweep, p), Error);
}

TEST_CASE("input validation") {
  TruncatedReaction tr = capillary_truncation();
  CHECK_THROWS_AS(minimize_energy(tr, -5.0, 2, 100, 1.0), Error);
  CHECK_THROWS_AS(minimize_energy(tr, 25.0, 1, 100, 1.0), Error);
  CHECK_THROWS_AS(minimize_energy(tr, 25.0, 2, 2, 1.0), Error);
  std::vector<double> bad{0.1, 0.2, 0.3};  // nonzero boundary value
  CHECK_THROWS_AS(discrete_energy(tr, bad, 10.0, 2), Error);
}
