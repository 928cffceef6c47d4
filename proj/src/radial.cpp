#include "caplab/radial.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "caplab/errors.hpp"
#include "caplab/interp.hpp"
#include "caplab/quadrature.hpp"

#include <json.hpp>

namespace caplab {

namespace {

// surface measure of the unit sphere S^{n-1}
double sphere_measure(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

struct Discretization {
  const TruncatedReaction* tr;
  double R;
  int n;
  int N;  // node count
  double h;
  double sigma;
  std::vector<double> rho_mid;   // r_{i+1/2}^{n-1}, one per cell
  std::vector<double> rho_node;  // averaged cell weights per node (for residual scaling)

  Discretization(const TruncatedReaction& tr_, double R_, int n_, int N_)
      : tr(&tr_), R(R_), n(n_), N(N_), h(R_ / (N_ - 1)), sigma(sphere_measure(n_)) {
    rho_mid.resize(N - 1);
    for (int i = 0; i < N - 1; ++i) rho_mid[i] = std::pow((i + 0.5) * h, n - 1);
    rho_node.resize(N);
    rho_node[0] = 0.5 * rho_mid[0];
    for (int i = 1; i < N - 1; ++i) rho_node[i] = 0.5 * (rho_mid[i - 1] + rho_mid[i]);
    rho_node[N - 1] = 0.5 * rho_mid[N - 2];
  }

  double energy(const std::vector<double>& u, double eps) const {
    double total = 0.0;
    for (int i = 0; i < N - 1; ++i) {
      double s = (u[i + 1] - u[i]) / h;
      double ubar = 0.5 * (u[i] + u[i + 1]);
      total += rho_mid[i] *
               (std::sqrt(1.0 + s * s) + 0.5 * eps * s * s - tr->F_tilde(ubar));
    }
    return sigma * h * total;
  }

  // gradient of the energy w.r.t. u_0..u_{N-2} (u_{N-1} fixed at 0)
  void gradient(const std::vector<double>& u, double eps, std::vector<double>& g) const {
    g.assign(N - 1, 0.0);
    for (int i = 0; i < N - 1; ++i) {
      double s = (u[i + 1] - u[i]) / h;
      double W = s / std::sqrt(1.0 + s * s) + eps * s;
      double fmid = tr->f_tilde(0.5 * (u[i] + u[i + 1]));
      double cell_u = sigma * h * rho_mid[i];
      // d/du_i and d/du_{i+1} of the cell energy
      g[i] += cell_u * (-W / h - 0.5 * fmid);
      if (i + 1 < N - 1) g[i + 1] += cell_u * (W / h - 0.5 * fmid);
    }
  }

  // tridiagonal Hessian (lower, diag, upper), same unknown ordering
  void hessian(const std::vector<double>& u, double eps, std::vector<double>& lo,
               std::vector<double>& di, std::vector<double>& up) const {
    int m = N - 1;
    lo.assign(m, 0.0);
    di.assign(m, 0.0);
    up.assign(m, 0.0);
    for (int i = 0; i < N - 1; ++i) {
      double s = (u[i + 1] - u[i]) / h;
      double w = 1.0 + s * s;
      double Wp = 1.0 / (w * std::sqrt(w)) + eps;
      double fp = tr->f_tilde_prime(0.5 * (u[i] + u[i + 1]));
      double c = sigma * h * rho_mid[i];
      double a = c * (Wp / (h * h) - 0.25 * fp);   // d2/du_i^2 and d2/du_{i+1}^2
      double b = c * (-Wp / (h * h) - 0.25 * fp);  // cross term
      di[i] += a;
      if (i + 1 < m) {
        di[i + 1] += a;
        up[i] += b;
        lo[i + 1] += b;
      }
    }
  }

  double residual_sup(const std::vector<double>& u, double eps, int* where = nullptr) const {
    std::vector<double> g;
    gradient(u, eps, g);
    double worst = 0.0;
    int at = 0;
    for (int i = 0; i < N - 1; ++i) {
      double res = std::abs(g[i]) / (sigma * h * rho_node[i]);
      if (res > worst) { worst = res; at = i; }
    }
    if (where) *where = at;
    return worst;
  }
};

void thomas_solve(std::vector<double> lo, std::vector<double> di, std::vector<double> up,
                  std::vector<double> rhs, std::vector<double>& x) {
  size_t m = di.size();
  for (size_t i = 1; i < m; ++i) {
    double w = lo[i] / di[i - 1];
    di[i] -= w * up[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  x.assign(m, 0.0);
  x[m - 1] = rhs[m - 1] / di[m - 1];
  for (size_t i = m - 1; i-- > 0;) x[i] = (rhs[i] - up[i] * x[i + 1]) / di[i];
}

// Damped Newton; returns false when line search / damping is exhausted.
bool newton_solve(const Discretization& d, double eps, std::vector<double>& u,
                  const MinimizeOptions& opt) {
  int m = d.N - 1;
  std::vector<double> g, lo, di, up, step, trial(u);
  for (int iter = 0; iter < opt.max_newton_iters; ++iter) {
    if (d.residual_sup(u, eps) <= opt.newton_tol) return true;
    d.gradient(u, eps, g);
    d.hessian(u, eps, lo, di, up);

    double lambda = 0.0;
    double E0 = d.energy(u, eps);
    bool advanced = false;
    for (int attempt = 0; attempt < 12 && !advanced; ++attempt) {
      std::vector<double> di_shift = di;
      if (lambda > 0.0)
        for (auto& v : di_shift) v += lambda;
      std::vector<double> rhs(m);
      for (int i = 0; i < m; ++i) rhs[i] = -g[i];
      thomas_solve(lo, di_shift, up, rhs, step);

      double slope = 0.0;
      for (int i = 0; i < m; ++i) slope += g[i] * step[i];
      if (!(slope < 0.0) || !std::isfinite(slope)) {
        lambda = (lambda == 0.0) ? 1e-6 : lambda * 10.0;
        continue;
      }
      // near the minimizer the predicted decrease -slope/2 sinks below the
      // roundoff floor of the total energy; the Armijo comparison is then
      // meaningless, and plain Newton is locally safe
      if (-0.5 * slope <= 1e-12 * (1.0 + std::abs(E0))) {
        for (int i = 0; i < m; ++i) u[i] += step[i];
        advanced = true;
        break;
      }
      double alpha = 1.0;
      for (int ls = 0; ls < opt.max_damping_steps; ++ls) {
        for (int i = 0; i < m; ++i) trial[i] = u[i] + alpha * step[i];
        double Et = d.energy(trial, eps);
        if (std::isfinite(Et) && Et <= E0 + 1e-4 * alpha * slope) {
          for (int i = 0; i < m; ++i) u[i] = trial[i];
          advanced = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!advanced) lambda = (lambda == 0.0) ? 1e-6 : lambda * 10.0;
    }
    if (!advanced) return false;
  }
  return d.residual_sup(u, eps) <= opt.newton_tol;
}

std::vector<double> cone_initial_guess(const Discretization& d, double L) {
  // competitor profile: L inside, linear ramp over the last unit, smoothed
  // over one grid cell at the kink
  std::vector<double> u(d.N, 0.0);
  for (int i = 0; i < d.N; ++i) {
    double r = i * d.h;
    double v = (r <= d.R - 1.0) ? L : L * (d.R - r);
    u[i] = std::max(0.0, v);
  }
  for (int i = 1; i + 1 < d.N; ++i) {
    double r = i * d.h;
    if (std::abs(r - (d.R - 1.0)) <= d.h)
      u[i] = 0.25 * (u[i - 1] + 2.0 * u[i] + u[i + 1]);
  }
  u[d.N - 1] = 0.0;
  return u;
}

struct ContinuationResult {
  std::vector<double> u;
  std::vector<double> eps_path;
  bool grad_violated = false;
  bool ok = false;
};

ContinuationResult continue_to_zero(const Discretization& d, std::vector<double> u,
                                    double epsilon0, const MinimizeOptions& opt) {
  ContinuationResult res;
  double grad_cap_sq = std::numeric_limits<double>::infinity();
  double infF = d.tr->inf_F_tilde();
  if (infF > -1.0) grad_cap_sq = 1.0 / ((infF + 1.0) * (infF + 1.0)) - 1.0;

  auto max_slope_sq = [&](const std::vector<double>& v) {
    double worst = 0.0;
    for (int i = 0; i + 1 < d.N; ++i) {
      double s = (v[i + 1] - v[i]) / d.h;
      worst = std::max(worst, s * s);
    }
    return worst;
  };

  std::vector<double> prev;
  double eps = epsilon0;
  for (int level = 0; level < opt.max_epsilon_levels; ++level) {
    if (!newton_solve(d, eps, u, opt)) {
      throw Error(ErrorKind::Numerical,
                  "continuation failure: Newton did not converge at eps=" +
                      std::to_string(eps));
    }
    res.eps_path.push_back(eps);
    if (max_slope_sq(u) > grad_cap_sq + 1e-8) res.grad_violated = true;
    if (!prev.empty()) {
      double diff = 0.0;
      for (int i = 0; i < d.N; ++i) diff = std::max(diff, std::abs(u[i] - prev[i]));
      if (diff < opt.continuation_stop) break;
    }
    prev = u;
    eps *= 0.25;
    if (eps < 1e-14) break;
  }
  if (!newton_solve(d, 0.0, u, opt))
    throw Error(ErrorKind::Numerical, "continuation failure: final eps=0 solve diverged");
  res.eps_path.push_back(0.0);
  if (max_slope_sq(u) > grad_cap_sq + 1e-8) res.grad_violated = true;
  res.u = std::move(u);
  res.ok = true;
  return res;
}

}  // namespace

namespace {

// nodal curvature from the radial equation itself, u'' = -W^3 f - W^2 (n-1) u'/r
// with the symmetric limit at the origin; keeps the interpolant's second
// derivative faithful between nodes, where a cubic through FD slopes is not
double ode_curvature(const RadialSolution& s, size_t i) {
  double up = s.u_prime[i];
  double W2 = 1.0 + up * up, W = std::sqrt(W2);
  double fu = s.tr.f_tilde(s.u[i]);
  if (i == 0) return -fu * W2 * W / (1.0 + (s.n - 1) * W2);
  return -W2 * W * fu - W2 * (s.n - 1) * up / s.r[i];
}

}  // namespace

double RadialSolution::u_at(double rq) const {
  if (r.size() < 2) throw Error(ErrorKind::InvalidInput, "radial solution has no data");
  if (rq <= r.front()) return u.front();
  if (rq >= r.back()) return u.back();
  double hh = h();
  auto i = std::min(static_cast<size_t>(rq / hh), r.size() - 2);
  return quintic_hermite(rq, r[i], r[i + 1], u[i], u[i + 1], u_prime[i], u_prime[i + 1],
                         ode_curvature(*this, i), ode_curvature(*this, i + 1));
}

double RadialSolution::u_prime_at(double rq) const {
  if (r.size() < 2) throw Error(ErrorKind::InvalidInput, "radial solution has no data");
  if (rq <= r.front()) return u_prime.front();
  if (rq >= r.back()) return u_prime.back();
  double hh = h();
  auto i = std::min(static_cast<size_t>(rq / hh), r.size() - 2);
  return quintic_hermite_deriv(rq, r[i], r[i + 1], u[i], u[i + 1], u_prime[i],
                               u_prime[i + 1], ode_curvature(*this, i),
                               ode_curvature(*this, i + 1));
}

void RadialSolution::write_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::InvalidInput, "cannot open " + path + " for writing");
  os.precision(17);
  os << "r,u,u_prime\n";
  for (size_t i = 0; i < r.size(); ++i)
    os << r[i] << ',' << u[i] << ',' << u_prime[i] << '\n';
}

std::string RadialSolution::to_json_metadata() const {
  nlohmann::json j;
  j["R"] = R;
  j["n"] = n;
  j["grid_points"] = r.size();
  j["delta"] = tr.delta();
  j["epsilon_path"] = epsilon_path;
  j["energy"] = energy;
  j["energy_cone_start"] = energy_cone_start;
  j["energy_zero_start"] = energy_zero_start;
  j["max_grad_sq"] = max_grad_sq;
  j["min_u"] = min_u;
  j["boundary_slope"] = u_prime.empty() ? 0.0 : u_prime.back();
  j["grad_bound_violated_on_path"] = grad_bound_violated_on_path;
  return j.dump(2);
}

RadialSolution minimize_energy(const TruncatedReaction& tr, double R, int n, int grid_points,
                               double epsilon0, const MinimizeOptions& opt) {
  if (!(R > 0.0)) throw Error(ErrorKind::InvalidInput, "R must be positive");
  if (grid_points < 64) throw Error(ErrorKind::InvalidInput, "grid_points must be >= 64");
  if (!(epsilon0 > 0.0 && epsilon0 <= 1.0))
    throw Error(ErrorKind::InvalidInput, "epsilon0 must lie in (0, 1]");
  if (n < 2) throw Error(ErrorKind::InvalidInput, "ambient dimension must be >= 2");

  Discretization d(tr, R, n, grid_points);

  double L = tr.is_zero_mode() ? 0.0 : tr.L();
  ContinuationResult from_cone =
      continue_to_zero(d, cone_initial_guess(d, L), epsilon0, opt);
  ContinuationResult from_zero =
      continue_to_zero(d, std::vector<double>(d.N, 0.0), epsilon0, opt);

  double e_cone = d.energy(from_cone.u, 0.0);
  double e_zero = d.energy(from_zero.u, 0.0);
  const ContinuationResult& winner = (e_cone <= e_zero) ? from_cone : from_zero;

  RadialSolution s;
  s.R = R;
  s.n = n;
  s.tr = tr;
  s.energy = std::min(e_cone, e_zero);
  s.energy_cone_start = e_cone;
  s.energy_zero_start = e_zero;
  s.epsilon_path = winner.eps_path;
  s.grad_bound_violated_on_path = from_cone.grad_violated || from_zero.grad_violated;
  s.r.resize(d.N);
  for (int i = 0; i < d.N; ++i) s.r[i] = i * d.h;
  s.u = winner.u;
  s.u.back() = 0.0;

  s.u_prime.resize(d.N);
  s.u_prime[0] = 0.0;  // radial symmetry
  for (int i = 1; i + 1 < d.N; ++i) s.u_prime[i] = (s.u[i + 1] - s.u[i - 1]) / (2.0 * d.h);
  s.u_prime[d.N - 1] =
      (3.0 * s.u[d.N - 1] - 4.0 * s.u[d.N - 2] + s.u[d.N - 3]) / (2.0 * d.h);

  s.max_grad_sq = 0.0;
  s.min_u = s.u[0];
  for (int i = 0; i < d.N; ++i) {
    s.max_grad_sq = std::max(s.max_grad_sq, s.u_prime[i] * s.u_prime[i]);
    s.min_u = std::min(s.min_u, s.u[i]);
  }
  return s;
}

double radial_residual(const RadialSolution& s) {
  Discretization d(s.tr, s.R, s.n, static_cast<int>(s.r.size()));
  return d.residual_sup(s.u, 0.0);
}

double radial_residual_expanded(const RadialSolution& s) {
  auto N = s.r.size();
  double h = s.h();
  double worst = 0.0;
  for (size_t i = 1; i + 1 < N; ++i) {
    double up = (s.u[i + 1] - s.u[i - 1]) / (2.0 * h);
    double upp = (s.u[i + 1] - 2.0 * s.u[i] + s.u[i - 1]) / (h * h);
    double w = 1.0 + up * up;
    double res = upp / (w * std::sqrt(w)) + (s.n - 1) / s.r[i] * up / std::sqrt(w) +
                 s.tr.f_tilde(s.u[i]);
    worst = std::max(worst, std::abs(res));
  }
  // origin: (n-1) u'/r -> (n-1) u'' with u'(0) = 0
  if (N > 2) {
    double upp0 = 2.0 * (s.u[1] - s.u[0]) / (h * h);
    worst = std::max(worst, std::abs(s.n * upp0 + s.tr.f_tilde(s.u[0])));
  }
  return worst;
}

Localization level_set_localization(const RadialSolution& s, double rho) {
  Localization loc;
  double umax = *std::max_element(s.u.begin(), s.u.end());
  if (!(rho > 0.0) || rho >= umax) {
    loc.degenerate = true;
    loc.width = s.R;
    return loc;
  }
  for (size_t i = 0; i < s.r.size(); ++i) {
    if (s.u[i] < rho) {
      loc.width = s.R - s.r[i];
      return loc;
    }
  }
  loc.degenerate = true;  // rho never attained below umax (flat solution)
  loc.width = 0.0;
  return loc;
}

double discrete_energy(const TruncatedReaction& tr, const std::vector<double>& v, double R,
                       int n) {
  if (v.size() < 2) throw Error(ErrorKind::InvalidInput, "candidate needs >= 2 nodes");
  if (v.back() != 0.0)
    throw Error(ErrorKind::InvalidInput, "candidate must vanish on the boundary");
  Discretization d(tr, R, n, static_cast<int>(v.size()));
  return d.energy(v, 0.0);
}

double potential_integral(const RadialSolution& s) {
  Discretization d(s.tr, s.R, s.n, static_cast<int>(s.r.size()));
  double total = 0.0;
  for (size_t i = 0; i + 1 < s.u.size(); ++i)
    total += d.rho_mid[i] * s.tr.F_tilde(0.5 * (s.u[i] + s.u[i + 1]));
  return d.sigma * d.h * total;
}

VerificationReport convergence_to_profile(const std::vector<RadialSolution>& sweep,
                                          const ProfileSolution& p, double Y,
                                          double final_tolerance) {
  if (sweep.size() < 3)
    throw Error(ErrorKind::InvalidInput,
                "convergence study needs at least 3 radii (got " +
                    std::to_string(sweep.size()) + ")");
  VerificationReport rep;
  std::vector<double> e;
  for (const auto& s : sweep) {
    double Ycap = std::min({Y, s.R, p.T()});
    double worst = 0.0;
    const int m = 2000;
    for (int j = 0; j <= m; ++j) {
      double y = Ycap * j / m;
      worst = std::max(worst, std::abs(s.u_at(s.R - y) - p.phi_at(y)));
    }
    e.push_back(worst);
  }
  bool decreasing = true;
  for (size_t i = 1; i < e.size(); ++i)
    if (!(e[i] < e[i - 1])) decreasing = false;
  for (size_t i = 0; i < e.size(); ++i) {
    std::ostringstream name;
    name << "profile-distance-R=" << sweep[i].R;
    rep.add_residual(name.str(), e[i],
                     (i + 1 == e.size()) ? final_tolerance
                                         : std::numeric_limits<double>::infinity());
  }
  rep.add_margin("profile-distance-decreasing", decreasing ? 1.0 : -1.0, 0.0);

  bool slope_increasing = true;
  double kappa_abs = std::abs(p.phi_prime.front());
  double prev = 0.0;
  for (size_t i = 0; i < sweep.size(); ++i) {
    double slope = std::abs(sweep[i].u_prime.back());
    if (i > 0 && !(slope > prev)) slope_increasing = false;
    prev = slope;
  }
  rep.add_margin("boundary-slope-increasing", slope_increasing ? 1.0 : -1.0, 0.0);
  rep.add_residual("boundary-slope-gap", std::abs(kappa_abs - prev), 0.1,
                   "R=" + std::to_string(sweep.back().R));
  return rep;
}

double measure_positivity_threshold(const TruncatedReaction& tr, int n, double grid_h,
                                    double R_lo, double R_hi, double dR) {
  auto positive = [&](double R) {
    int N = std::max(64, static_cast<int>(std::lround(R / grid_h)) + 1);
    RadialSolution s = minimize_energy(tr, R, n, N, 1.0);
    // interior nodes only; the boundary node is 0 by construction
    for (size_t i = 0; i + 1 < s.u.size(); ++i)
      if (!(s.u[i] > 0.0)) return false;
    return true;
  };
  if (positive(R_lo)) return R_lo;
  if (!positive(R_hi))
    throw Error(ErrorKind::Numerical, "no positive minimizer up to R=" + std::to_string(R_hi));
  double lo = R_lo, hi = R_hi;
  while (hi - lo > dR) {
    double mid = 0.5 * (lo + hi);
    if (positive(mid)) hi = mid; else lo = mid;
  }
  return hi;
}

}  // namespace caplab
