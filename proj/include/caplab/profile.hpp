#pragma once

#include <string>
#include <vector>

#include "caplab/reaction.hpp"
#include "caplab/report.hpp"

namespace caplab {

// Sampled one-dimensional parallel profile phi(t) with its first integral
//   H(t) = F(phi) - (1 + phi'^2)^{-1/2}
// recorded at every node (identically -1 for the normalized primitive).
struct ProfileSolution {
  std::vector<double> t;          // uniform, t[0] = 0
  std::vector<double> phi;        // phi[0] = 0
  std::vector<double> phi_prime;  // phi_prime[0] = |kappa|
  std::vector<double> hamiltonian;
  double L_target = 0.0;
  std::string method;  // "quadrature" or "shooting"

  size_t size() const { return t.size(); }
  bool empty() const { return t.empty(); }
  double T() const { return t.empty() ? 0.0 : t.back(); }

  // interpolated height / slope at arbitrary t in [0, T]
  double phi_at(double tq) const;
  double phi_prime_at(double tq) const;

  void write_csv(const std::string& path) const;
  std::string to_json_metadata() const;
};

// Separable-form construction: t(phi) = \int_0^phi ds / sqrt((F(s)+1)^{-2} - 1),
// integrated up to phi = L * height_cut and resampled uniformly in t. The
// quadrature tolerance is absolute; cuts very close to the asymptote make the
// integrand near-singular and deserve a looser tolerance.
ProfileSolution profile_by_quadrature(const ReactionTerm& r, double height_cut = 0.999,
                                      int output_points = 4097, double quad_tol = 1e-12);

// Classical 4th-order one-step integration of the curvature ODE
//   phi'' = -f(phi) (1 + phi'^2)^{3/2},  phi(0) = 0, phi'(0) = |kappa|.
// Hamiltonian drift is recorded as a diagnostic at every output node;
// divergence out of [-delta_guard, L + delta_guard] raises Error(Numerical).
ProfileSolution profile_by_shooting(const ReactionTerm& r, double T, double step,
                                    int output_stride = 1);

// Converse direction of the characterization lemma, run as a numerical check:
// boundedness/positivity of phi plus the recovered conditions on f and F.
VerificationReport assert_profile_characterization(const ProfileSolution& p,
                                                   const ReactionTerm& r);

}  // namespace caplab
