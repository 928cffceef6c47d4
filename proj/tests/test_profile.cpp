#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "caplab/errors.hpp"
#include "caplab/profile.hpp"
#include "caplab/reaction.hpp"
#include "caplab/verifier.hpp"

using namespace caplab;

namespace {

ReactionTerm linear_term(double b = 1.0) {
  double ch = std::sqrt(2.0 * (1.0 - 1.0 / std::sqrt(2.0)) / b);
  return make_reaction([=](double v) { return b * (ch - v); },
                       [=](double) { return -b; }, -1.0, -0.25, 1.5);
}

double max_drift(const ProfileSolution& p) {
  double d = 0.0;
  for (double h : p.hamiltonian) d = std::max(d, std::abs(h - p.hamiltonian.front()));
  return d;
}

}  // namespace

TEST_CASE("shooting profile conserves the first integral at 4th order") {
  ReactionTerm r = linear_term();
  CHECK(max_drift(profile_by_shooting(r, 20.0, 1e-4, 100)) <= 1e-8);
  // the order factor is measured at coarse steps where truncation error is
  // well above the roundoff floor (drift at step 1e-4 is already ~7e-14)
  double d1 = max_drift(profile_by_shooting(r, 20.0, 8e-3, 1));
  double d2 = max_drift(profile_by_shooting(r, 20.0, 4e-3, 1));
  CHECK(d1 / d2 >= 8.0);
}

TEST_CASE("quadrature and shooting agree below the cut") {
  ReactionTerm r = linear_term();
  double L = *r.L;
  ProfileSolution q = profile_by_quadrature(r, 0.99, 2049);
  ProfileSolution s = profile_by_shooting(r, q.T(), 1e-4, 100);
  double gap = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s.phi[i] > 0.99 * L) break;
    gap = std::max(gap, std::abs(s.phi[i] - q.phi_at(s.t[i])));
  }
  CHECK(gap <= 1e-6);
}

TEST_CASE("initial data and monotone approach to the asymptote") {
  ReactionTerm r = linear_term();
  ProfileSolution p = profile_by_shooting(r, 20.0, 1e-4, 100);
  CHECK(p.phi.front() == 0.0);
  CHECK(p.phi_prime.front() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.phi.back() == doctest::Approx(*r.L).epsilon(1e-6));
  CHECK(std::abs(p.phi_prime.back()) <= 1e-6);
  // terminal oscillation around the asymptote sits at roundoff scale
  for (size_t i = 1; i < p.size(); ++i) CHECK(p.phi[i] >= p.phi[i - 1] - 1e-8);
}

TEST_CASE("characterization battery passes the genuine profile") {
  ReactionTerm r = linear_term();
  ProfileSolution p = profile_by_shooting(r, 20.0, 1e-4, 100);
  VerificationReport rep = assert_profile_characterization(p, r);
  CAPTURE(rep.summary());
  CHECK(rep.all_pass());
  CHECK(hamiltonian_check(p).all_pass());
}

TEST_CASE("characterization catches a rescaled impostor") {
  ReactionTerm r = linear_term();
  ProfileSolution p = profile_by_shooting(r, 20.0, 1e-4, 100);
  for (double& v : p.phi) v *= 1.01;
  for (double& v : p.phi_prime) v *= 1.01;
  VerificationReport rep = assert_profile_characterization(p, r);
  CHECK_FALSE(rep.all_pass());
  const CheckResult* c = rep.find("hamiltonian-consistency");
  REQUIRE(c != nullptr);
  CHECK_FALSE(c->pass);
}

TEST_CASE("divergent shot leaves the guard band with a numerical error") {
  // flipped sign drives phi downward without bound
  ReactionTerm r = make_reaction([](double v) { return v - 2.0; },
                                 [](double) { return 1.0; }, -1.0, -0.25, 1.5);
  CHECK_THROWS_AS(profile_by_shooting(r, 20.0, 1e-3), Error);
}

TEST_CASE("interpolation is consistent with the stored samples") {
  ReactionTerm r = linear_term();
  ProfileSolution p = profile_by_quadrature(r, 0.99, 513);
  for (size_t i = 0; i < p.size(); i += 37) {
    CHECK(p.phi_at(p.t[i]) == doctest::Approx(p.phi[i]).epsilon(1e-13));
    CHECK(p.phi_prime_at(p.t[i]) == doctest::Approx(p.phi_prime[i]).epsilon(1e-13));
  }
  // midpoints stay between the neighboring samples (phi is monotone)
  for (size_t i = 0; i + 1 < p.size(); i += 53) {
    double mid = p.phi_at(0.5 * (p.t[i] + p.t[i + 1]));
    CHECK(mid >= p.phi[i] - 1e-12);
    CHECK(mid <= p.phi[i + 1] + 1e-12);
  }
}

TEST_CASE("csv output round trips the node count") {
  ReactionTerm r = linear_term();
  ProfileSolution p = profile_by_quadrature(r, 0.99, 65);
  std::string path = "profile_test_tmp.csv";
  p.write_csv(path);
  std::ifstream is(path);
  REQUIRE(is.good());
  std::string line;
  size_t rows = 0;
  std::getline(is, line);
  CHECK(line == "t,phi,phi_prime,hamiltonian");
  while (std::getline(is, line)) ++rows;
  CHECK(rows == p.size());
  is.close();
  std::remove(path.c_str());
}

TEST_CASE("input validation") {
  ReactionTerm r = linear_term();
  CHECK_THROWS_AS(profile_by_quadrature(r, 1.5, 100), Error);
  CHECK_THROWS_AS(profile_by_quadrature(r, -0.1, 100), Error);
  CHECK_THROWS_AS(profile_by_shooting(r, -1.0, 1e-3), Error);
  ReactionTerm no_L = make_reaction([](double) { return 0.01; },
                                    [](double) { return 0.0; }, -1.0, -0.1, 0.5);
  CHECK_THROWS_AS(profile_by_quadrature(no_L, 0.99, 100), Error);
}
