#include "caplab/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "caplab/errors.hpp"
#include "caplab/quadrature.hpp"

namespace caplab {

namespace {

double sphere_measure(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

struct Grad {
  double x, y;
  double norm() const { return std::hypot(x, y); }
  double sq() const { return x * x + y * y; }
};

// analytic samples when the field carries them, otherwise second-order
// differences (centered inside, one-sided on the edges)
Grad grad_at(const Field2D& f, size_t j, size_t i) {
  if (f.has_gradient()) return {f.gx[f.idx(j, i)], f.gy[f.idx(j, i)]};
  double hx = f.hx(), hy = f.hy();
  double gx, gy;
  if (i == 0)
    gx = (-3.0 * f.at(j, 0) + 4.0 * f.at(j, 1) - f.at(j, 2)) / (2.0 * hx);
  else if (i + 1 == f.nx())
    gx = (3.0 * f.at(j, i) - 4.0 * f.at(j, i - 1) + f.at(j, i - 2)) / (2.0 * hx);
  else
    gx = (f.at(j, i + 1) - f.at(j, i - 1)) / (2.0 * hx);
  if (j == 0)
    gy = (-3.0 * f.at(0, i) + 4.0 * f.at(1, i) - f.at(2, i)) / (2.0 * hy);
  else if (j + 1 == f.ny())
    gy = (3.0 * f.at(j, i) - 4.0 * f.at(j - 1, i) + f.at(j - 2, i)) / (2.0 * hy);
  else
    gy = (f.at(j + 1, i) - f.at(j - 1, i)) / (2.0 * hy);
  return {gx, gy};
}

std::vector<double> p_samples(const Field2D& f, const ScalarFn& F,
                              std::vector<double>* grad_norm = nullptr) {
  std::vector<double> P(f.u.size());
  if (grad_norm) grad_norm->resize(f.u.size());
  for (size_t j = 0; j < f.ny(); ++j)
    for (size_t i = 0; i < f.nx(); ++i) {
      Grad g = grad_at(f, j, i);
      P[f.idx(j, i)] = F(f.at(j, i)) - 1.0 / std::sqrt(1.0 + g.sq());
      if (grad_norm) (*grad_norm)[f.idx(j, i)] = g.norm();
    }
  return P;
}

std::string node_loc(const Field2D& f, size_t j, size_t i) {
  std::ostringstream os;
  os << "x=" << f.x[i] << ",y=" << f.y[j];
  return os.str();
}

ModicaResult modica_from_samples(PFunctionSamples s, double tol, double trigger_margin,
                                 const std::string& where_max) {
  ModicaResult out;
  double pmax = *std::max_element(s.P.begin(), s.P.end());
  double pmin = *std::min_element(s.P.begin(), s.P.end());
  out.p_spread = pmax - pmin;
  out.rigidity_triggered = s.bound - pmax <= trigger_margin;
  std::ostringstream note;
  note << "max P=" << pmax << " bound=" << s.bound << " spread=" << out.p_spread;
  if (out.rigidity_triggered) note << "; rigidity-clause-triggered";
  out.report.add_margin("modica-bound", s.bound - pmax, tol, where_max, note.str());
  out.samples = std::move(s);
  return out;
}

}  // namespace

ModicaResult modica_check(const Field2D& field, const ReactionTerm& r, double tol,
                          double trigger_margin) {
  auto F = [&r](double u) { return r.F(u); };
  PFunctionSamples s;
  s.P = p_samples(field, F, &s.grad_norm);
  s.bound = std::max(-1.0, r.F0() - 1.0 / std::sqrt(1.0 + r.kappa * r.kappa));
  size_t arg = std::max_element(s.P.begin(), s.P.end()) - s.P.begin();
  return modica_from_samples(std::move(s), tol, trigger_margin,
                             node_loc(field, arg / field.nx(), arg % field.nx()));
}

ModicaResult modica_check(const RadialSolution& s, double tol, double trigger_margin) {
  PFunctionSamples ps;
  ps.P.resize(s.r.size());
  ps.grad_norm.resize(s.r.size());
  for (size_t i = 0; i < s.r.size(); ++i) {
    double g = s.u_prime[i];
    ps.P[i] = s.tr.F_tilde(s.u[i]) - 1.0 / std::sqrt(1.0 + g * g);
    ps.grad_norm[i] = std::abs(g);
  }
  double kappa = s.tr.is_zero_mode() ? -1.0 : s.tr.base().kappa;
  ps.bound = std::max(-1.0, s.tr.F_tilde(0.0) - 1.0 / std::sqrt(1.0 + kappa * kappa));
  size_t arg = std::max_element(ps.P.begin(), ps.P.end()) - ps.P.begin();
  return modica_from_samples(std::move(ps), tol, trigger_margin,
                             "r=" + std::to_string(s.r[arg]));
}

VerificationReport subsolution_residual(const Field2D& field, const ScalarFn& F,
                                        const ScalarFn& f, double grad_floor, double tol) {
  VerificationReport rep;
  if (field.nx() < 3 || field.ny() < 3)
    throw Error(ErrorKind::InvalidInput, "subsolution check needs at least a 3x3 field");
  double hx = field.hx(), hy = field.hy();
  std::vector<double> P = p_samples(field, F);
  auto Pv = [&](size_t j, size_t i) { return P[field.idx(j, i)]; };

  double worst = std::numeric_limits<double>::infinity();
  size_t wj = 0, wi = 0, tested = 0;
  for (size_t j = 1; j + 1 < field.ny(); ++j)
    for (size_t i = 1; i + 1 < field.nx(); ++i) {
      Grad g = grad_at(field, j, i);
      double q = g.sq();
      if (std::sqrt(q) < grad_floor) continue;
      ++tested;
      double uxx = (field.at(j, i + 1) - 2.0 * field.at(j, i) + field.at(j, i - 1)) / (hx * hx);
      double uyy = (field.at(j + 1, i) - 2.0 * field.at(j, i) + field.at(j - 1, i)) / (hy * hy);
      double uxy = (field.at(j + 1, i + 1) - field.at(j + 1, i - 1) - field.at(j - 1, i + 1) +
                    field.at(j - 1, i - 1)) /
                   (4.0 * hx * hy);
      double Px = (Pv(j, i + 1) - Pv(j, i - 1)) / (2.0 * hx);
      double Py = (Pv(j + 1, i) - Pv(j - 1, i)) / (2.0 * hy);
      double Pxx = (Pv(j, i + 1) - 2.0 * Pv(j, i) + Pv(j, i - 1)) / (hx * hx);
      double Pyy = (Pv(j + 1, i) - 2.0 * Pv(j, i) + Pv(j - 1, i)) / (hy * hy);
      double Pxy = (Pv(j + 1, i + 1) - Pv(j + 1, i - 1) - Pv(j - 1, i + 1) +
                    Pv(j - 1, i - 1)) /
                   (4.0 * hx * hy);
      double W = std::sqrt(1.0 + q);
      double fu = f(field.at(j, i));
      double drift = W * (1.0 + q + 1.0 / q) * fu;
      double bx = drift * g.x + (1.0 - 1.0 / q) * (g.x * uxx + g.y * uxy);
      double by = drift * g.y + (1.0 - 1.0 / q) * (g.x * uxy + g.y * uyy);
      double lhs = (1.0 + q) * (Pxx + Pyy) -
                   (g.x * g.x * Pxx + 2.0 * g.x * g.y * Pxy + g.y * g.y * Pyy) + bx * Px +
                   by * Py;
      if (lhs < worst) { worst = lhs; wj = j; wi = i; }
    }
  if (tested == 0) {
    rep.add_margin("subsolution-min-lhs", 0.0, tol, "",
                   "empty-test: no interior node with |grad u| >= floor");
    return rep;
  }
  rep.add_margin("subsolution-min-lhs", worst, tol, node_loc(field, wj, wi),
                 "nodes tested: " + std::to_string(tested));
  return rep;
}

VerificationReport boundary_identities(const Field2D& field, const ScalarFn& F,
                                       const ScalarFn& f, const BoundaryTolerances& tol) {
  VerificationReport rep;
  if (!field.dirichlet_at_y0)
    throw Error(ErrorKind::InvalidInput, "field has no flagged Dirichlet side");
  if (field.nx() < 3 || field.ny() < 4)
    throw Error(ErrorKind::InvalidInput, "boundary stencils need nx >= 3, ny >= 4");
  double hx = field.hx(), hy = field.hy();

  // outward normal at y = 0 is -e_y, so u_nu = -u_y and kappa = -u_y < 0
  std::vector<double> slope(field.nx());
  for (size_t i = 0; i < field.nx(); ++i)
    slope[i] = (-3.0 * field.at(0, i) + 4.0 * field.at(1, i) - field.at(2, i)) / (2.0 * hy);
  double s_lo = *std::min_element(slope.begin(), slope.end());
  double s_hi = *std::max_element(slope.begin(), slope.end());
  rep.add_residual("boundary-slope-constant", s_hi - s_lo, tol.slope_constancy);
  if (s_hi - s_lo > tol.slope_constancy) {
    const char* flag = "identity-inapplicable: boundary slope not constant";
    rep.add_residual("identity-equation-boundary", 0.0, tol.equation, "", flag);
    rep.add_residual("identity-P-normal-derivative", 0.0, tol.p_normal, "", flag);
    rep.add_residual("identity-recovered-curvature", 0.0, tol.curvature, "", flag);
    return rep;
  }
  double kappa = 0.0;
  for (double s : slope) kappa -= s / static_cast<double>(field.nx());
  double k2 = kappa * kappa;
  double w1 = 1.0 / std::sqrt(1.0 + k2), w3 = std::pow(1.0 + k2, -1.5);

  std::vector<double> P = p_samples(field, F);
  double worst_eq = 0.0, worst_pn = 0.0, worst_H = 0.0;
  size_t at_eq = 1, at_pn = 1, at_H = 1;
  for (size_t i = 1; i + 1 < field.nx(); ++i) {
    double u0 = field.at(0, i);
    double uxx = (field.at(0, i + 1) - 2.0 * u0 + field.at(0, i - 1)) / (hx * hx);
    double uyy = (2.0 * u0 - 5.0 * field.at(1, i) + 4.0 * field.at(2, i) - field.at(3, i)) /
                 (hy * hy);
    double lap = uxx + uyy;  // u_nunu = u_yy since nu = -e_y

    double eq = w1 * lap - k2 * w3 * uyy + f(u0);
    if (std::abs(eq) > worst_eq) { worst_eq = std::abs(eq); at_eq = i; }

    double Pnu = -(-3.0 * P[field.idx(0, i)] + 4.0 * P[field.idx(1, i)] -
                   P[field.idx(2, i)]) /
                 (2.0 * hy);
    double pn = Pnu - (kappa * f(u0) + kappa * w3 * uyy);
    if (std::abs(pn) > worst_pn) { worst_pn = std::abs(pn); at_pn = i; }

    // n = 2 on the field; recovered curvature of the flat side must vanish
    double H = (lap - uyy) / kappa;
    if (std::abs(H) > worst_H) { worst_H = std::abs(H); at_H = i; }
  }
  rep.add_residual("identity-equation-boundary", worst_eq, tol.equation,
                   node_loc(field, 0, at_eq));
  rep.add_residual("identity-P-normal-derivative", worst_pn, tol.p_normal,
                   node_loc(field, 0, at_pn));
  rep.add_residual("identity-recovered-curvature", worst_H, tol.curvature,
                   node_loc(field, 0, at_H), "expected H=0");
  return rep;
}

VerificationReport boundary_identities(const RadialSolution& s,
                                       const BoundaryTolerances& tol) {
  VerificationReport rep;
  if (s.r.size() < 4)
    throw Error(ErrorKind::InvalidInput, "boundary stencils need at least 4 radial nodes");
  size_t m = s.r.size() - 1;
  double h = s.h(), R = s.R;
  auto ft = [&s](double u) { return s.tr.f_tilde(u); };
  auto Ft = [&s](double u) { return s.tr.F_tilde(u); };

  double kappa = s.u_prime[m];  // measured boundary slope, nu = +e_r
  rep.add_residual("boundary-slope-constant", 0.0, tol.slope_constancy, "",
                   "single boundary point");
  double k2 = kappa * kappa;
  double w1 = 1.0 / std::sqrt(1.0 + k2), w3 = std::pow(1.0 + k2, -1.5);

  double upp = (2.0 * s.u[m] - 5.0 * s.u[m - 1] + 4.0 * s.u[m - 2] - s.u[m - 3]) / (h * h);
  // independent 3rd-order slope so the curvature recovery is not circular
  double up4 = (11.0 * s.u[m] - 18.0 * s.u[m - 1] + 9.0 * s.u[m - 2] - 2.0 * s.u[m - 3]) /
               (6.0 * h);
  double lap = upp + (s.n - 1) * up4 / R;

  double eq = w1 * lap - k2 * w3 * upp + ft(s.u[m]);
  rep.add_residual("identity-equation-boundary", std::abs(eq), tol.equation, "r=R");

  auto Pat = [&](size_t i) {
    return Ft(s.u[i]) - 1.0 / std::sqrt(1.0 + s.u_prime[i] * s.u_prime[i]);
  };
  double Pnu = (3.0 * Pat(m) - 4.0 * Pat(m - 1) + Pat(m - 2)) / (2.0 * h);
  double pn = Pnu - (kappa * ft(s.u[m]) + kappa * w3 * upp);
  rep.add_residual("identity-P-normal-derivative", std::abs(pn), tol.p_normal, "r=R");

  double H = (lap - upp) / (kappa * (s.n - 1));
  rep.add_residual("identity-recovered-curvature", std::abs(H - 1.0 / R), tol.curvature,
                   "r=R", "expected H=1/R");
  return rep;
}

VerificationReport pohozaev_residual(const RadialSolution& s, double tol) {
  VerificationReport rep;
  if (s.r.size() < 3)
    throw Error(ErrorKind::InvalidInput, "pohozaev check needs at least 3 radial nodes");
  int n = s.n;
  double sigma = sphere_measure(n), h = s.h(), R = s.R;
  auto phi_p = [](double t) { return 1.0 / std::sqrt(1.0 + t); };
  auto phi = [](double t) { return 2.0 * (std::sqrt(1.0 + t) - 1.0); };
  auto psi = [&](double t) { return phi(t) - (2.0 / n) * t * phi_p(t); };
  auto psit = [&](double t) { return 2.0 * t * phi_p(t) - phi(t); };
  double F0 = s.tr.F_tilde(0.0);

  // the boundary flux is quadratically sensitive to the slope, so resample
  // u' at 4th order instead of trusting the stored 2nd-order samples
  size_t m = s.r.size() - 1;
  std::vector<double> up(s.u_prime);
  if (s.r.size() >= 5) {
    const std::vector<double>& u = s.u;
    for (size_t i = 2; i + 2 <= m; ++i)
      up[i] = (-u[i + 2] + 8.0 * u[i + 1] - 8.0 * u[i - 1] + u[i - 2]) / (12.0 * h);
    up[1] = (-3.0 * u[0] - 10.0 * u[1] + 18.0 * u[2] - 6.0 * u[3] + u[4]) / (12.0 * h);
    up[m - 1] = (3.0 * u[m] + 10.0 * u[m - 1] - 18.0 * u[m - 2] + 6.0 * u[m - 3] -
                 u[m - 4]) /
                (12.0 * h);
    up[m] = (25.0 * u[m] - 48.0 * u[m - 1] + 36.0 * u[m - 2] - 16.0 * u[m - 3] +
             3.0 * u[m - 4]) /
            (12.0 * h);
  }
  std::vector<double> a(s.r.size()), b(s.r.size());
  for (size_t i = 0; i < s.r.size(); ++i) {
    double w = sigma * std::pow(s.r[i], n - 1);
    a[i] = psi(up[i] * up[i]) * w;
    b[i] = (s.tr.F_tilde(s.u[i]) - F0) * w;
  }
  double T1 = 0.5 * n * simpson_tabulated(a, h);
  double T2 = -static_cast<double>(n) * simpson_tabulated(b, h);
  double unu = up.back();
  double T3 = 0.5 * R * psit(unu * unu) * sigma * std::pow(R, n - 1);

  double den = std::max({std::abs(T1), std::abs(T2), std::abs(T3)});
  double res = den > 0.0 ? std::abs(T1 + T2 + T3) / den : 0.0;
  std::ostringstream note;
  note << "T1=" << T1 << " T2=" << T2 << " T3=" << T3;
  rep.add_residual("pohozaev-normalized-residual", res, tol, "", note.str());
  return rep;
}

namespace {

VerificationReport w_bound_report(double kappa, double max_abs_f, double sup_we,
                                  const std::string& where, double max_W, double max_abs_u,
                                  const std::string& hyp_note) {
  VerificationReport rep;
  double A0 = 8.0 * (max_abs_f + 1.0);
  double bound = std::sqrt(1.0 + kappa * kappa) + A0 + 1.0;
  std::ostringstream note;
  note << "A0=" << A0 << " sup W e^{-2u}=" << sup_we << hyp_note;
  rep.add_margin("w-exp-bound", bound - sup_we, 0.0, where, note.str());
  rep.add_margin("grad-sup-explicit-bound", bound * std::exp(2.0 * max_abs_u) - max_W, 0.0);
  return rep;
}

}  // namespace

VerificationReport gradient_bound_check(const RadialSolution& s) {
  double u_lo = s.min_u, u_hi = *std::max_element(s.u.begin(), s.u.end());
  double max_f = 0.0, sup_we = 0.0, max_W = 0.0, max_abs_u = 0.0;
  size_t arg = 0;
  for (size_t i = 0; i < s.r.size(); ++i) {
    max_f = std::max(max_f, std::abs(s.tr.f_tilde(s.u[i])));
    double W = std::sqrt(1.0 + s.u_prime[i] * s.u_prime[i]);
    double we = W * std::exp(-2.0 * s.u[i]);
    if (we > sup_we) { sup_we = we; arg = i; }
    max_W = std::max(max_W, W);
    max_abs_u = std::max(max_abs_u, std::abs(s.u[i]));
  }
  std::string hyp;
  for (int k = 0; k <= 400; ++k) {
    double u = u_lo + (u_hi - u_lo) * k / 400.0;
    if (s.tr.f_tilde_prime(u) > 1e-10) {
      hyp = "; hypothesis-violated: f' > 0 at u=" + std::to_string(u);
      break;
    }
  }
  double kappa = s.u_prime.back();
  return w_bound_report(kappa, max_f, sup_we, "r=" + std::to_string(s.r[arg]), max_W,
                        max_abs_u, hyp);
}

VerificationReport gradient_bound_check(const Field2D& field, const ReactionTerm& r) {
  double u_lo = field.u[0], u_hi = field.u[0];
  double max_f = 0.0, sup_we = 0.0, max_W = 0.0, max_abs_u = 0.0;
  size_t wj = 0, wi = 0;
  for (size_t j = 0; j < field.ny(); ++j)
    for (size_t i = 0; i < field.nx(); ++i) {
      double u = field.at(j, i);
      u_lo = std::min(u_lo, u);
      u_hi = std::max(u_hi, u);
      max_f = std::max(max_f, std::abs(r.f(u)));
      double W = std::sqrt(1.0 + grad_at(field, j, i).sq());
      double we = W * std::exp(-2.0 * u);
      if (we > sup_we) { sup_we = we; wj = j; wi = i; }
      max_W = std::max(max_W, W);
      max_abs_u = std::max(max_abs_u, std::abs(u));
    }
  std::string hyp;
  for (int k = 0; k <= 400; ++k) {
    double u = u_lo + (u_hi - u_lo) * k / 400.0;
    if (r.f_prime(u) > 1e-10) {
      hyp = "; hypothesis-violated: f' > 0 at u=" + std::to_string(u);
      break;
    }
  }
  return w_bound_report(r.kappa, max_f, sup_we, node_loc(field, wj, wi), max_W, max_abs_u,
                        hyp);
}

VerificationReport hamiltonian_check(const ProfileSolution& p, double tol) {
  VerificationReport rep;
  if (p.size() < 2) {
    rep.add_margin("hamiltonian-drift", -1.0, 0.0, "", "insufficient data");
    return rep;
  }
  double drift = 0.0;
  size_t at = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    double d = std::abs(p.hamiltonian[i] - p.hamiltonian.front());
    if (d > drift) { drift = d; at = i; }
  }
  rep.add_residual("hamiltonian-drift", drift, tol, "t=" + std::to_string(p.t[at]));
  return rep;
}

}  // namespace caplab
