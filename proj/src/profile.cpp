#include "caplab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "caplab/errors.hpp"
#include "caplab/interp.hpp"
#include "caplab/quadrature.hpp"

#include <json.hpp>

namespace caplab {

namespace {

size_t locate(const std::vector<double>& xs, double x) {
  if (x <= xs.front()) return 0;
  if (x >= xs[xs.size() - 2]) return xs.size() - 2;
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  return static_cast<size_t>(it - xs.begin()) - 1;
}

}  // namespace

double ProfileSolution::phi_at(double tq) const {
  if (t.size() < 2) throw Error(ErrorKind::InvalidInput, "profile has no data");
  if (tq <= t.front()) return phi.front();
  if (tq >= t.back()) return phi.back();
  size_t i = locate(t, tq);
  return hermite(tq, t[i], t[i + 1], phi[i], phi[i + 1], phi_prime[i], phi_prime[i + 1]);
}

double ProfileSolution::phi_prime_at(double tq) const {
  if (t.size() < 2) throw Error(ErrorKind::InvalidInput, "profile has no data");
  if (tq <= t.front()) return phi_prime.front();
  if (tq >= t.back()) return phi_prime.back();
  size_t i = locate(t, tq);
  // slope of phi' from the ODE is not stored; Hermite on phi with the chain
  // rule is enough here, a centered secant of phi' costs accuracy only at h^2
  double w = (tq - t[i]) / (t[i + 1] - t[i]);
  double m0 = phi_prime[i], m1 = phi_prime[i + 1];
  return m0 + (m1 - m0) * w;
}

void ProfileSolution::write_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::InvalidInput, "cannot open " + path + " for writing");
  os.precision(17);
  os << "t,phi,phi_prime,hamiltonian\n";
  for (size_t i = 0; i < t.size(); ++i)
    os << t[i] << ',' << phi[i] << ',' << phi_prime[i] << ',' << hamiltonian[i] << '\n';
}

std::string ProfileSolution::to_json_metadata() const {
  nlohmann::json j;
  j["method"] = method;
  j["nodes"] = t.size();
  j["T"] = T();
  j["L_target"] = L_target;
  if (!t.empty()) {
    j["phi_terminal"] = phi.back();
    j["phi_prime_terminal"] = phi_prime.back();
    double drift = 0.0;
    for (double h : hamiltonian) drift = std::max(drift, std::abs(h - hamiltonian.front()));
    j["hamiltonian_drift"] = drift;
  }
  return j.dump(2);
}

ProfileSolution profile_by_quadrature(const ReactionTerm& r, double height_cut,
                                      int output_points, double quad_tol) {
  if (!(height_cut > 0.0 && height_cut < 1.0))
    throw Error(ErrorKind::InvalidInput, "height_cut must lie in (0, 1)");
  if (!(quad_tol > 0.0)) throw Error(ErrorKind::InvalidInput, "quad_tol must be positive");
  if (!r.L)
    throw Error(ErrorKind::Admissibility,
                "profile_by_quadrature requires an admissible term (no L found)");
  double L = *r.L;
  double phi_cut = L * height_cut;

  // Near L the cached primitive is a difference of O(1) quantities and loses
  // the digits the separable form needs ((F+1)^{-2}-1 vanishes quadratically),
  // so recompute F there as the small integral -\int_s^L f. The algebraic
  // rewrite -F(F+2)/(F+1)^2 avoids the remaining cancellation.
  auto F_sharp = [&r, L](double s) {
    if (L - s > 0.05) return r.F(s);
    int panels = 1 + static_cast<int>((L - s) / 0.01);
    double total = 0.0;
    for (int k = 0; k < panels; ++k) {
      double a = s + (L - s) * k / panels, b = s + (L - s) * (k + 1) / panels;
      total += gauss_legendre_5(r.f, a, b);
    }
    return -total;
  };
  auto slope_sq = [&F_sharp](double s) {
    double F = F_sharp(s);
    double Fp1 = F + 1.0;
    if (!(Fp1 > 0.0))
      throw Error(ErrorKind::Admissibility,
                  "F(s) + 1 <= 0 at s=" + std::to_string(s) + "; inf F condition violated");
    double v = -F * (F + 2.0) / (Fp1 * Fp1);
    if (v < 0.0)
      throw Error(ErrorKind::Admissibility,
                  "F(s) >= 0 at s=" + std::to_string(s) + " inside (0, L); profile slope "
                  "would be imaginary");
    return v;
  };
  auto integrand = [&](double s) { return 1.0 / std::sqrt(slope_sq(s)); };

  CumulativeQuadrature cum = integrate_cumulative(integrand, 0.0, phi_cut, quad_tol);
  double T = cum.integral.back();
  double inner_tol = 0.1 * quad_tol;

  ProfileSolution p;
  p.method = "quadrature";
  p.L_target = L;
  p.t.resize(output_points);
  p.phi.resize(output_points);
  p.phi_prime.resize(output_points);
  p.hamiltonian.resize(output_points);

  for (int j = 0; j < output_points; ++j) {
    double tj = T * j / (output_points - 1);
    double phi_j;
    if (j == 0) {
      phi_j = 0.0;
    } else if (j == output_points - 1) {
      phi_j = phi_cut;
    } else {
      // invert the monotone map t(phi): bracket by the cumulative table,
      // then Newton with the exact dt/dphi
      size_t k = locate(cum.integral, tj);
      double lo = cum.x[k], hi = cum.x[k + 1];
      double tlo = cum.integral[k], thi = cum.integral[k + 1];
      phi_j = lo + (hi - lo) * (tj - tlo) / (thi - tlo);
      for (int it = 0; it < 60; ++it) {
        double t_here = tlo + integrate(integrand, lo, phi_j, inner_tol);
        double err = t_here - tj;
        if (std::abs(err) < inner_tol * (1.0 + T)) break;
        double step = -err / integrand(phi_j);
        phi_j = std::clamp(phi_j + step, lo, hi);
      }
    }
    double pp = (phi_j <= 0.0) ? std::abs(r.kappa) : std::sqrt(slope_sq(phi_j));
    p.t[j] = tj;
    p.phi[j] = phi_j;
    p.phi_prime[j] = pp;
    p.hamiltonian[j] = r.F(phi_j) - 1.0 / std::sqrt(1.0 + pp * pp);
  }
  return p;
}

ProfileSolution profile_by_shooting(const ReactionTerm& r, double T, double step,
                                    int output_stride) {
  if (!(T > 0.0 && step > 0.0))
    throw Error(ErrorKind::InvalidInput, "T and step must be positive");
  if (output_stride < 1) output_stride = 1;
  double L = r.L.value_or(1.0);
  const double guard_lo = -0.5, guard_hi = L + 0.5;

  auto accel = [&r](double phi, double p) {
    double w = 1.0 + p * p;
    return -r.f(phi) * w * std::sqrt(w);
  };

  auto n_steps = static_cast<size_t>(std::llround(T / step));
  double h = T / static_cast<double>(n_steps);

  ProfileSolution out;
  out.method = "shooting";
  out.L_target = L;
  out.t.reserve(n_steps / output_stride + 2);
  out.phi.reserve(n_steps / output_stride + 2);
  out.phi_prime.reserve(n_steps / output_stride + 2);
  out.hamiltonian.reserve(n_steps / output_stride + 2);

  double phi = 0.0, p = std::abs(r.kappa);
  auto record = [&](size_t i) {
    out.t.push_back(i * h);
    out.phi.push_back(phi);
    out.phi_prime.push_back(p);
    out.hamiltonian.push_back(r.F(phi) - 1.0 / std::sqrt(1.0 + p * p));
  };
  record(0);
  for (size_t i = 0; i < n_steps; ++i) {
    double k1p = p,               k1v = accel(phi, p);
    double k2p = p + 0.5 * h * k1v, k2v = accel(phi + 0.5 * h * k1p, p + 0.5 * h * k1v);
    double k3p = p + 0.5 * h * k2v, k3v = accel(phi + 0.5 * h * k2p, p + 0.5 * h * k2v);
    double k4p = p + h * k3v,       k4v = accel(phi + h * k3p, p + h * k3v);
    phi += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    p += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (phi < guard_lo || phi > guard_hi)
      throw Error(ErrorKind::Numerical,
                  "profile diverged out of the admissible band at t=" +
                      std::to_string((i + 1) * h));
    if ((i + 1) % static_cast<size_t>(output_stride) == 0 || i + 1 == n_steps) record(i + 1);
  }
  return out;
}

VerificationReport assert_profile_characterization(const ProfileSolution& p,
                                                   const ReactionTerm& r) {
  VerificationReport rep;
  if (p.size() < 3) {
    rep.add_margin("profile-data-sufficient", -1.0, 0.0, "",
                   "insufficient data: fewer than 3 samples");
    return rep;
  }
  rep.add_margin("profile-data-sufficient", 1.0, 0.0);

  double min_phi = *std::min_element(p.phi.begin(), p.phi.end());
  double max_phi = *std::max_element(p.phi.begin(), p.phi.end());
  rep.add_margin("phi-bounded-below-L", p.L_target - max_phi, 1e-9);
  rep.add_margin("phi-nonnegative", min_phi, 1e-12);

  double min_slope = std::numeric_limits<double>::infinity();
  size_t min_at = 0;
  for (size_t i = 1; i < p.size(); ++i)
    if (p.phi_prime[i] < min_slope) { min_slope = p.phi_prime[i]; min_at = i; }
  // the slope tends to 0 at the asymptote, so strictness carries a small
  // tolerance for the integrator's terminal oscillation around phi = L
  rep.add_margin("phi-strictly-increasing", min_slope, 1e-6,
                 "t=" + std::to_string(p.t[min_at]));

  // recovered admissibility conditions at the asymptotic height
  double L = p.L_target;
  rep.add_residual("recovered-f-at-L", std::abs(r.f(L)), 1e-6);
  rep.add_residual("recovered-F-at-L", std::abs(r.F(L)), 1e-9);
  rep.add_residual("recovered-F0-normalization",
                   std::abs(r.F(0.0) - r.normalization_target()), 1e-9);
  rep.add_margin("recovered-infF-above-minus-one", r.inf_F + 1.0, 0.0);

  // first-integral consistency recomputed from (phi, phi') through r
  double drift = 0.0;
  size_t drift_at = 0;
  double h0 = r.F(p.phi[0]) - 1.0 / std::sqrt(1.0 + p.phi_prime[0] * p.phi_prime[0]);
  for (size_t i = 0; i < p.size(); ++i) {
    double hi = r.F(p.phi[i]) - 1.0 / std::sqrt(1.0 + p.phi_prime[i] * p.phi_prime[i]);
    double d = std::abs(hi - h0);
    if (d > drift) { drift = d; drift_at = i; }
  }
  rep.add_residual("hamiltonian-consistency", drift, 1e-7,
                   "t=" + std::to_string(p.t[drift_at]));
  return rep;
}

}  // namespace caplab
