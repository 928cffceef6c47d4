#pragma once

#include <vector>

#include "caplab/profile.hpp"
#include "caplab/reaction.hpp"
#include "caplab/report.hpp"

namespace caplab {

// Radial minimizer of the (epsilon-continued) energy
//   I_{R,eps}(u) = \int_{B_R} sqrt(1+|u'|^2) + (eps/2)|u'|^2 - F_tilde(u)
// on a uniform grid over [0, R] with u(R) = 0.
struct RadialSolution {
  double R = 0.0;
  int n = 2;  // ambient dimension
  std::vector<double> r;        // uniform, r.front() = 0, r.back() = R
  std::vector<double> u;        // u.back() = 0 exactly
  std::vector<double> u_prime;  // one-sided at the endpoints
  double energy = 0.0;          // discrete I_R at eps = 0 (includes the angular measure)
  double energy_cone_start = 0.0, energy_zero_start = 0.0;
  std::vector<double> epsilon_path;
  TruncatedReaction tr;
  double max_grad_sq = 0.0;     // max |u'|^2 along the final solution
  double min_u = 0.0;
  bool grad_bound_violated_on_path = false;

  double h() const { return r.size() > 1 ? r[1] - r[0] : 0.0; }
  double u_at(double rq) const;       // Hermite interpolation
  double u_prime_at(double rq) const;

  void write_csv(const std::string& path) const;
  std::string to_json_metadata() const;
};

struct MinimizeOptions {
  double newton_tol = 1e-10;      // sup norm of the scaled Euler-Lagrange residual
  int max_newton_iters = 200;
  int max_damping_steps = 40;
  double continuation_stop = 1e-8;  // sup-norm change between epsilon levels
  int max_epsilon_levels = 60;
};

// Damped Newton on the discrete Euler-Lagrange system with geometric
// epsilon continuation (factor 1/4) and warm starts; the final solve runs
// at eps = 0. Both the mollified-cone and the zero initial guess are tried,
// the lower discrete energy wins.
RadialSolution minimize_energy(const TruncatedReaction& tr, double R, int n, int grid_points,
                               double epsilon0, const MinimizeOptions& opt = {});

// Sup norm of the discrete radial ODE residual (conservative flux form of
// the eps = 0 equation; the r -> 0 term uses its symmetric limit).
double radial_residual(const RadialSolution& s);
// Same equation in expanded form with centered differences; differs from the
// flux form by the O(h^2) consistency gap, reported as a diagnostic.
double radial_residual_expanded(const RadialSolution& s);

struct Localization {
  double width = 0.0;   // R - min{ r : u(r) < rho }
  bool degenerate = false;
};
Localization level_set_localization(const RadialSolution& s, double rho);

// Discrete energy of an arbitrary radial candidate v (v.back() must be 0),
// at eps = 0; used by the minimizer property tests and the sandwich checks.
double discrete_energy(const TruncatedReaction& tr, const std::vector<double>& v, double R,
                       int n);
// Weighted integral of F_tilde(u) over the ball (same quadrature as the energy).
double potential_integral(const RadialSolution& s);

// Proposition-7.1-style comparison: e(R) = sup_{y in [0, Y]} |u_R(R-y) - phi(y)|
// must decrease along the sweep and the boundary slope must approach |kappa|.
VerificationReport convergence_to_profile(const std::vector<RadialSolution>& sweep,
                                          const ProfileSolution& p, double Y = 10.0,
                                          double final_tolerance = 0.05);

// Smallest radius in [R_lo, R_hi] (bisection, resolution dR) where the
// minimizer is positive at all interior nodes.
double measure_positivity_threshold(const TruncatedReaction& tr, int n, double grid_h,
                                    double R_lo, double R_hi, double dR = 0.5);

}  // namespace caplab
