#include "caplab/field2d.hpp"

#include <cmath>
#include <utility>

#include "caplab/errors.hpp"

namespace caplab {

Field2D extend_profile_to_2d(const ProfileSolution& p, double X, int nx) {
  if (p.size() < 3)
    throw Error(ErrorKind::InvalidInput, "profile too short to extend to a field");
  if (nx < 3 || !(X > 0.0)) throw Error(ErrorKind::InvalidInput, "need X > 0 and nx >= 3");
  Field2D f;
  f.dirichlet_at_y0 = true;
  f.x.resize(nx);
  for (int i = 0; i < nx; ++i) f.x[i] = X * i / (nx - 1);
  f.y = p.t;
  f.u.resize(f.nx() * f.ny());
  f.gx.assign(f.nx() * f.ny(), 0.0);
  f.gy.resize(f.nx() * f.ny());
  for (size_t j = 0; j < f.ny(); ++j)
    for (size_t i = 0; i < f.nx(); ++i) {
      f.u[f.idx(j, i)] = p.phi[j];
      f.gy[f.idx(j, i)] = p.phi_prime[j];
    }
  return f;
}

Field2D radial_quadrant_patch(const RadialSolution& s, double depth, double margin, int nx,
                              int ny) {
  if (nx < 5 || ny < 5) throw Error(ErrorKind::InvalidInput, "patch needs >= 5x5 nodes");
  if (!(margin >= 0.0 && depth > margin && depth < s.R))
    throw Error(ErrorKind::InvalidInput, "need 0 <= margin < depth < R");
  // box along the diagonal whose corner radii span [R - depth, R - margin]
  double r_in = s.R - depth, r_out = s.R - margin;
  double a = r_in / std::sqrt(2.0), b = r_out / std::sqrt(2.0);
  Field2D f;
  f.x.resize(nx);
  f.y.resize(ny);
  for (int i = 0; i < nx; ++i) f.x[i] = a + (b - a) * i / (nx - 1);
  for (int j = 0; j < ny; ++j) f.y[j] = a + (b - a) * j / (ny - 1);
  f.u.resize(f.nx() * f.ny());
  f.gx.resize(f.u.size());
  f.gy.resize(f.u.size());
  for (size_t j = 0; j < f.ny(); ++j)
    for (size_t i = 0; i < f.nx(); ++i) {
      double r = std::hypot(f.x[i], f.y[j]);
      double up = s.u_prime_at(r);
      f.u[f.idx(j, i)] = s.u_at(r);
      f.gx[f.idx(j, i)] = up * f.x[i] / r;
      f.gy[f.idx(j, i)] = up * f.y[j] / r;
    }
  return f;
}

double field_pde_residual(const Field2D& f, const ScalarFn& reaction) {
  double hx = f.hx(), hy = f.hy();
  double worst = 0.0;
  auto flux = [](double px, double py) {
    double w = std::sqrt(1.0 + px * px + py * py);
    return std::pair<double, double>{px / w, py / w};
  };
  for (size_t j = 1; j + 1 < f.ny(); ++j)
    for (size_t i = 1; i + 1 < f.nx(); ++i) {
      // conservative stencil: flux differences between half-nodes
      double sxE = (f.at(j, i + 1) - f.at(j, i)) / hx;
      double syE = (f.at(j + 1, i + 1) + f.at(j + 1, i) - f.at(j - 1, i + 1) - f.at(j - 1, i)) /
                   (4.0 * hy);
      double sxW = (f.at(j, i) - f.at(j, i - 1)) / hx;
      double syW = (f.at(j + 1, i) + f.at(j + 1, i - 1) - f.at(j - 1, i) - f.at(j - 1, i - 1)) /
                   (4.0 * hy);
      double syN = (f.at(j + 1, i) - f.at(j, i)) / hy;
      double sxN = (f.at(j + 1, i + 1) + f.at(j, i + 1) - f.at(j + 1, i - 1) - f.at(j, i - 1)) /
                   (4.0 * hx);
      double syS = (f.at(j, i) - f.at(j - 1, i)) / hy;
      double sxS = (f.at(j, i + 1) + f.at(j - 1, i + 1) - f.at(j, i - 1) - f.at(j - 1, i - 1)) /
                   (4.0 * hx);
      double div = (flux(sxE, syE).first - flux(sxW, syW).first) / hx +
                   (flux(sxN, syN).second - flux(sxS, syS).second) / hy;
      double res = std::abs(div + reaction(f.at(j, i)));
      worst = std::max(worst, res);
    }
  return worst;
}

}  // namespace caplab
