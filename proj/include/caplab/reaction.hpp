#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "caplab/report.hpp"

namespace caplab {

using ScalarFn = std::function<double(double)>;

// A reaction term f together with the normalized primitive
//   F(u) = F(0) + \int_0^u f,   F(0) = (1 + kappa^2)^{-1/2} - 1,
// and the structural data (L, inf F) used everywhere downstream.
// The primitive is cached on a dense grid over the declared search interval;
// between nodes it is evaluated by Hermite interpolation with the exact
// derivative f, so F' = f holds to quadrature accuracy.
class ReactionTerm {
 public:
  ScalarFn f;
  ScalarFn f_prime;
  double kappa = -1.0;
  std::optional<double> L;      // smallest zero level of F above 0, when found
  double inf_F = 0.0;           // infimum of F over [search_lo, min(L, search_hi)]
  double inf_F_at = 0.0;
  double search_lo = 0.0;
  double search_hi = 0.0;

  double F(double u) const;
  double F0() const { return F0_; }
  double normalization_target() const;  // (1+kappa^2)^{-1/2} - 1

  // Copy with the primitive shifted to a different value at 0 (test hook for
  // the normalization check; everything else is untouched).
  ReactionTerm with_F0(double value) const;

 private:
  friend ReactionTerm make_reaction(ScalarFn, ScalarFn, double, double, double);
  double F0_ = 0.0;
  // cumulative integral of f from search_lo, cached at uniform nodes
  std::vector<double> grid_x_, grid_cumint_;
  double int_lo_to_zero_ = 0.0;
  double cum_from_lo(double u) const;
};

ReactionTerm make_reaction(ScalarFn f, ScalarFn f_prime, double kappa, double search_lo,
                           double search_hi);

struct AdmissibilityReport {
  VerificationReport checks;  // the five named conditions with margins/witnesses
  bool admissible() const { return checks.all_pass(); }
};

AdmissibilityReport check_admissibility(const ReactionTerm& r);

// C1 extension of f outside [0, L]: identical on [0, L], cubic Hermite blends
// to zero on [-delta, 0] and [L, L+delta], zero beyond.
class TruncatedReaction {
 public:
  TruncatedReaction() = default;

  double f_tilde(double u) const;
  double f_tilde_prime(double u) const;
  double F_tilde(double u) const;

  const ReactionTerm& base() const { return base_; }
  double delta() const { return delta_; }
  double L() const { return L_; }
  double inf_F_tilde() const { return inf_F_tilde_; }  // over all of R
  bool is_zero_mode() const { return zero_mode_; }

  // margin bounds realized for this kappa (the paper's -1 normalization
  // constants, expressed through the gap 1 + F(0))
  double bound_e62_lo() const { return e62_lo_; }
  double bound_e62_hi() const { return e62_hi_; }
  double bound_close_u() const { return closeu_lo_; }

  // Test mode: f_tilde == 0, F_tilde == 0 identically.
  static TruncatedReaction zero(double L_hint = 1.0);

 private:
  friend TruncatedReaction truncate(const ReactionTerm&, double);
  static TruncatedReaction build(const ReactionTerm& r, double delta);
  ReactionTerm base_;
  double delta_ = 0.0, L_ = 0.0;
  double fL_prime_ = 0.0, f0_ = 0.0, f0_prime_ = 0.0;
  double F_upper_tail_ = 0.0, F_lower_tail_ = 0.0;
  double inf_F_tilde_ = 0.0;
  double e62_lo_ = 0.0, e62_hi_ = 0.0, closeu_lo_ = 0.0;
  bool zero_mode_ = false;
};

// Chooses delta <= delta_hint by bisection so the margin conditions on
// F_tilde hold; throws Error(Admissibility) when no delta works.
TruncatedReaction truncate(const ReactionTerm& r, double delta_hint);

struct MuLevels {
  std::vector<double> mu;  // strictly increasing toward L
  bool truncated = false;  // true when grid resolution exhausted the request
};

// Strict-maximum levels mu_n computed from F_tilde on [0, L - 1/n]; n starts
// at the smallest integer making the interval nonempty.
MuLevels mu_levels(const TruncatedReaction& tr, int count);

}  // namespace caplab
