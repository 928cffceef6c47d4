#include "caplab/reaction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "caplab/errors.hpp"
#include "caplab/interp.hpp"
#include "caplab/quadrature.hpp"

namespace caplab {

namespace {

constexpr int kPrimitiveCells = 8192;
constexpr int kScanSamples = 8192;

// 5-point Gauss-Legendre on [a, b]
double gauss5(const ScalarFn& f, double a, double b) {
  static const double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
  static const double ws[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                               0.4786286704993665, 0.2369268850561891};
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += ws[i] * f(c + h * xs[i]);
  return h * s;
}

// Golden-section refinement of a minimum bracketed in [a, b].
double golden_min(const ScalarFn& f, double a, double b, double tol = 1e-12) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double bisect_root(const ScalarFn& f, double a, double b) {
  double fa = f(a), fb = f(b);
  if (fa * fb > 0.0) throw Error(ErrorKind::Numerical, "root not bracketed");
  for (int i = 0; i < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++i) {
    double m = 0.5 * (a + b), fm = f(m);
    if (fa * fm <= 0.0) { b = m; fb = fm; } else { a = m; fa = fm; }
  }
  return 0.5 * (a + b);
}

}  // namespace

double ReactionTerm::normalization_target() const {
  return 1.0 / std::sqrt(1.0 + kappa * kappa) - 1.0;
}

double ReactionTerm::cum_from_lo(double u) const {
  if (u <= grid_x_.front())
    return grid_cumint_.front() - integrate(f, u, grid_x_.front(), 1e-12);
  if (u >= grid_x_.back()) return grid_cumint_.back() + integrate(f, grid_x_.back(), u, 1e-12);
  double h = (grid_x_.back() - grid_x_.front()) / kPrimitiveCells;
  auto idx = static_cast<size_t>((u - grid_x_.front()) / h);
  idx = std::min(idx, grid_x_.size() - 2);
  return grid_cumint_[idx] + gauss5(f, grid_x_[idx], u);
}

double ReactionTerm::F(double u) const { return F0_ + (cum_from_lo(u) - int_lo_to_zero_); }

ReactionTerm ReactionTerm::with_F0(double value) const {
  ReactionTerm copy = *this;
  copy.F0_ = value;
  return copy;
}

ReactionTerm make_reaction(ScalarFn f, ScalarFn f_prime, double kappa, double search_lo,
                           double search_hi) {
  if (!(kappa < 0.0))
    throw Error(ErrorKind::InvalidInput, "kappa must be negative (Neumann constant)");
  if (!(search_lo < 0.0 && search_hi > 0.0))
    throw Error(ErrorKind::InvalidInput, "search interval must contain 0 in its interior");

  ReactionTerm r;
  r.f = std::move(f);
  r.f_prime = std::move(f_prime);
  r.kappa = kappa;
  r.search_lo = search_lo;
  r.search_hi = search_hi;
  r.F0_ = r.normalization_target();

  // cache the cumulative integral of f at uniform nodes
  double h = (search_hi - search_lo) / kPrimitiveCells;
  r.grid_x_.resize(kPrimitiveCells + 1);
  r.grid_cumint_.resize(kPrimitiveCells + 1);
  r.grid_cumint_[0] = 0.0;
  for (int i = 0; i <= kPrimitiveCells; ++i) r.grid_x_[i] = search_lo + i * h;
  for (int i = 0; i < kPrimitiveCells; ++i) {
    double fi = r.f(r.grid_x_[i]);
    if (!std::isfinite(fi))
      throw Error(ErrorKind::InvalidInput,
                  "non-finite f at u=" + std::to_string(r.grid_x_[i]));
    r.grid_cumint_[i + 1] = r.grid_cumint_[i] + gauss5(r.f, r.grid_x_[i], r.grid_x_[i + 1]);
  }
  if (!std::isfinite(r.f(search_hi)))
    throw Error(ErrorKind::InvalidInput, "non-finite f at search upper bound");
  r.int_lo_to_zero_ = r.cum_from_lo(0.0);

  // locate L: smallest zero level of F above 0. Either a transversal sign
  // change or a tangential touch at the maximum of F.
  auto Feval = [&r](double u) { return r.F(u); };
  double step = search_hi / kScanSamples;
  double prevF = r.F0_;
  std::optional<double> L;
  for (int i = 1; i <= kScanSamples; ++i) {
    double x = i * step;
    double Fx = Feval(x);
    if (prevF < 0.0 && Fx >= 0.0) {
      L = (Fx == 0.0) ? x : bisect_root(Feval, x - step, x);
      break;
    }
    prevF = Fx;
  }
  if (!L) {
    // tangential touch: refine the maximum of F on (0, search_hi]
    double best_x = step, best_F = Feval(step);
    for (int i = 2; i <= kScanSamples; ++i) {
      double x = i * step, Fx = Feval(x);
      if (Fx > best_F) { best_F = Fx; best_x = x; }
    }
    double a = std::max(step, best_x - step), b = std::min(search_hi, best_x + step);
    double x_star = golden_min([&](double x) { return -Feval(x); }, a, b);
    // polish on f when the touch looks degenerate (F' = f = 0 there)
    if (std::abs(r.f(x_star)) < 1e-3 * (1.0 + std::abs(r.f(0.0)))) {
      for (int it = 0; it < 8; ++it) {
        double fp = r.f_prime(x_star);
        if (std::abs(fp) < 1e-14) break;
        double nx = x_star - r.f(x_star) / fp;
        if (!(nx > 0.0 && nx < search_hi)) break;
        x_star = nx;
      }
    }
    if (std::abs(Feval(x_star)) <= 1e-9) L = x_star;
  }
  r.L = L;

  // infimum of F on [search_lo, min(L, search_hi)]
  double top = L ? std::min(*L, search_hi) : search_hi;
  double span = top - search_lo;
  double best_x = search_lo, best_F = Feval(search_lo);
  for (int i = 1; i <= kScanSamples; ++i) {
    double x = search_lo + span * i / kScanSamples;
    double Fx = Feval(x);
    if (Fx < best_F) { best_F = Fx; best_x = x; }
  }
  double a = std::max(search_lo, best_x - span / kScanSamples);
  double b = std::min(top, best_x + span / kScanSamples);
  r.inf_F_at = golden_min(Feval, a, b);
  r.inf_F = std::min(best_F, Feval(r.inf_F_at));
  return r;
}

AdmissibilityReport check_admissibility(const ReactionTerm& r) {
  AdmissibilityReport rep;
  const double tol_norm = 1e-9, tol_f = 1e-6;

  double norm_res = std::abs(r.F(0.0) - r.normalization_target());
  rep.checks.add_margin("F0-normalization", tol_norm - norm_res, 0.0, "u=0");

  rep.checks.add_margin("existence-of-L", r.L ? 1.0 : -1.0, 0.0,
                        r.L ? "L=" + std::to_string(*r.L) : "no zero level of F above 0");

  if (r.L) {
    double fL = std::abs(r.f(*r.L));
    rep.checks.add_margin("f-vanishes-at-L", tol_f - fL, 0.0, "u=" + std::to_string(*r.L));

    // F < 0 strictly below L, sampled away from the tangential end
    double eta = 1e-3 * std::max(1.0, *r.L);
    double worst = -std::numeric_limits<double>::infinity();
    double worst_x = r.search_lo;
    int m = 10000;
    for (int i = 0; i <= m; ++i) {
      double x = r.search_lo + (*r.L - eta - r.search_lo) * i / m;
      double Fx = r.F(x);
      if (Fx > worst) { worst = Fx; worst_x = x; }
    }
    rep.checks.add_margin("F-negative-below-L", -worst, 0.0, "u=" + std::to_string(worst_x));
  } else {
    rep.checks.add_margin("f-vanishes-at-L", -1.0, 0.0, "no L");
    rep.checks.add_margin("F-negative-below-L", -1.0, 0.0, "no L");
  }

  rep.checks.add_margin("infF-above-minus-one", r.inf_F + 1.0, 0.0,
                        "u=" + std::to_string(r.inf_F_at));
  return rep;
}

double TruncatedReaction::f_tilde(double u) const {
  if (zero_mode_) return 0.0;
  if (u >= 0.0 && u <= L_) return base_.f(u);
  if (u >= L_ + delta_ || u <= -delta_) return 0.0;
  if (u > L_) return hermite(u, L_, L_ + delta_, 0.0, 0.0, fL_prime_, 0.0);
  return hermite(u, -delta_, 0.0, 0.0, f0_, 0.0, f0_prime_);
}

double TruncatedReaction::f_tilde_prime(double u) const {
  if (zero_mode_) return 0.0;
  if (u >= 0.0 && u <= L_) return base_.f_prime(u);
  if (u >= L_ + delta_ || u <= -delta_) return 0.0;
  if (u > L_) return hermite_deriv(u, L_, L_ + delta_, 0.0, 0.0, fL_prime_, 0.0);
  return hermite_deriv(u, -delta_, 0.0, 0.0, f0_, 0.0, f0_prime_);
}

double TruncatedReaction::F_tilde(double u) const {
  if (zero_mode_) return 0.0;
  if (u >= 0.0 && u <= L_) return base_.F(u);
  if (u >= L_ + delta_) return F_upper_tail_;
  if (u <= -delta_) return F_lower_tail_;
  if (u > L_) return hermite_integral(u, L_, L_ + delta_, 0.0, 0.0, fL_prime_, 0.0);
  // F(0) minus the integral of f_tilde from u to 0
  double full = hermite_integral(0.0, -delta_, 0.0, 0.0, f0_, 0.0, f0_prime_);
  double part = hermite_integral(u, -delta_, 0.0, 0.0, f0_, 0.0, f0_prime_);
  return base_.F0() - (full - part);
}

TruncatedReaction TruncatedReaction::zero(double L_hint) {
  TruncatedReaction tr;
  tr.zero_mode_ = true;
  tr.L_ = L_hint;
  tr.delta_ = 0.1;
  tr.inf_F_tilde_ = 0.0;
  return tr;
}

namespace {

bool margins_hold(const TruncatedReaction& tr, std::string* why) {
  const int m = 2000;
  double L = tr.L(), d = tr.delta();
  double f0 = tr.base().f(0.0);
  double amp = 2.0 * (std::abs(f0) + 1.0);
  // sign and amplitude constraints on the extension pieces
  for (int i = 0; i <= m; ++i) {
    double u = L + d * i / m;
    if (tr.f_tilde(u) > 1e-14) { if (why) *why = "f_tilde > 0 on [L, L+delta]"; return false; }
  }
  for (int i = 0; i <= m; ++i) {
    double u = -d + d * i / m;
    if (std::abs(tr.f_tilde(u)) > amp) {
      if (why) *why = "|f_tilde| exceeds 2(|f(0)|+1) on [-delta, 0]";
      return false;
    }
  }
  // (e6.2) on u <= 0 (tails are constant; check down to -delta - 1)
  for (int i = 0; i <= m; ++i) {
    double u = -(d + 1.0) + (d + 1.0) * i / m;
    double Ft = tr.F_tilde(u);
    if (Ft < tr.bound_e62_lo() || Ft > tr.bound_e62_hi()) {
      if (why) *why = "F_tilde outside the nonpositive-side band at u=" + std::to_string(u);
      return false;
    }
  }
  // (e.close-u) on [L - 2 delta, L]
  for (int i = 0; i <= m; ++i) {
    double u = L - 2.0 * d + 2.0 * d * i / m;
    if (tr.F_tilde(u) < tr.bound_close_u()) {
      if (why) *why = "F_tilde below the close-to-L floor at u=" + std::to_string(u);
      return false;
    }
  }
  // (cond-F): F_tilde(L) = 0 > F_tilde(u) for u < L
  if (std::abs(tr.F_tilde(L)) > 1e-9) { if (why) *why = "F_tilde(L) != 0"; return false; }
  double eta = 1e-3 * std::max(1.0, L);
  for (int i = 0; i <= m; ++i) {
    double u = -d + (L - eta + d) * i / m;
    if (tr.F_tilde(u) >= 0.0) {
      if (why) *why = "F_tilde >= 0 below L at u=" + std::to_string(u);
      return false;
    }
  }
  return true;
}

}  // namespace

TruncatedReaction TruncatedReaction::build(const ReactionTerm& r, double delta) {
  TruncatedReaction tr;
  tr.base_ = r;
  tr.delta_ = delta;
  tr.L_ = *r.L;
  tr.fL_prime_ = std::min(0.0, r.f_prime(tr.L_));  // F has a max at L, so f'(L) <= 0
  tr.f0_ = r.f(0.0);
  tr.f0_prime_ = r.f_prime(0.0);
  tr.F_upper_tail_ =
      hermite_integral(tr.L_ + delta, tr.L_, tr.L_ + delta, 0.0, 0.0, tr.fL_prime_, 0.0);
  double full = hermite_integral(0.0, -delta, 0.0, 0.0, tr.f0_, 0.0, tr.f0_prime_);
  tr.F_lower_tail_ = r.F0() - full;

  double gap = 1.0 + r.F0();  // = (1+kappa^2)^{-1/2}
  tr.e62_lo_ = r.F0() - 0.5 * gap;
  tr.e62_hi_ = r.F0() + gap * (3.0 / (2.0 * std::sqrt(2.0)) - 1.0);
  tr.closeu_lo_ = -gap / (4.0 * std::sqrt(2.0));

  // infimum of F_tilde over R (dense sampling; tails constant)
  double lo = -delta - 0.5, hi = tr.L_ + delta + 0.5;
  double inf = tr.F_tilde(lo);
  int m = 20000;
  for (int i = 0; i <= m; ++i) {
    double u = lo + (hi - lo) * i / m;
    inf = std::min(inf, tr.F_tilde(u));
  }
  tr.inf_F_tilde_ = inf;
  return tr;
}

TruncatedReaction truncate(const ReactionTerm& r, double delta_hint) {
  if (!(delta_hint > 0.0)) throw Error(ErrorKind::InvalidInput, "delta_hint must be positive");
  if (!check_admissibility(r).admissible())
    throw Error(ErrorKind::Admissibility, "reaction term is not admissible; cannot truncate");

  std::string why;
  double delta = delta_hint;
  double delta_fail = -1.0;
  const int max_halvings = 48;
  int k = 0;
  TruncatedReaction candidate;
  for (; k < max_halvings; ++k) {
    candidate = TruncatedReaction::build(r, delta);
    if (margins_hold(candidate, &why)) break;
    delta_fail = delta;
    delta *= 0.5;
  }
  if (k == max_halvings)
    throw Error(ErrorKind::Admissibility, "truncation-infeasible: no delta in (0, " +
                                              std::to_string(delta_hint) + "] meets the "
                                              "margin conditions (" + why + ")");
  if (delta_fail > 0.0) {
    // grow back toward the failing delta to keep the extension as smooth as possible
    double lo = delta, hi = delta_fail;
    for (int i = 0; i < 20; ++i) {
      double mid = 0.5 * (lo + hi);
      TruncatedReaction t = TruncatedReaction::build(r, mid);
      if (margins_hold(t, nullptr)) { lo = mid; candidate = t; } else { hi = mid; }
    }
  }
  return candidate;
}

MuLevels mu_levels(const TruncatedReaction& tr, int count) {
  if (count < 1) throw Error(ErrorKind::InvalidInput, "mu_levels: count must be >= 1");
  MuLevels out;
  double L = tr.L();
  int n0 = static_cast<int>(std::floor(1.0 / L)) + 1;
  const int m = 10000;
  double grid_step = L / m;
  double prev = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < count; ++k) {
    int n = n0 + k;
    double top = L - 1.0 / n;
    if (top <= 0.0) { ++n0; --k; continue; }
    // smallest argmax of F_tilde on [0, top], paper's construction verbatim
    double best = tr.F_tilde(0.0), best_x = 0.0;
    int steps = std::max(2, static_cast<int>(top / grid_step));
    for (int i = 1; i <= steps; ++i) {
      double x = top * i / steps;
      double Fx = tr.F_tilde(x);
      if (Fx > best) { best = Fx; best_x = x; }
    }
    if (best_x <= prev + grid_step) {
      out.truncated = true;  // successive levels no longer resolvable
      break;
    }
    out.mu.push_back(best_x);
    prev = best_x;
  }
  return out;
}

}  // namespace caplab
