#pragma once

#include <vector>

#include "caplab/profile.hpp"
#include "caplab/radial.hpp"

namespace caplab {

// Rectangular sample of a height function u(x, y). When the field represents
// a solution with Dirichlet data, the flagged side is y = 0. Analytic
// gradient samples are optional; checks fall back to finite differences.
struct Field2D {
  std::vector<double> x, y;  // uniform grids
  std::vector<double> u;     // row-major, index(j, i) = j * nx + i
  std::vector<double> gx, gy;  // optional analytic gradient (same layout)
  bool dirichlet_at_y0 = false;

  size_t nx() const { return x.size(); }
  size_t ny() const { return y.size(); }
  double hx() const { return x.size() > 1 ? x[1] - x[0] : 0.0; }
  double hy() const { return y.size() > 1 ? y[1] - y[0] : 0.0; }
  size_t idx(size_t j, size_t i) const { return j * nx() + i; }
  double at(size_t j, size_t i) const { return u[idx(j, i)]; }
  bool has_gradient() const { return !gx.empty(); }
};

// u(x, y) = phi(y) on the strip [0, X] x [0, T]; the analytic gradient
// (0, phi') is carried along since it is exact for a parallel field.
Field2D extend_profile_to_2d(const ProfileSolution& p, double X, int nx);

// Patch of the ball solution straddling the 45-degree direction, covering
// radii [R - depth, R - margin]; all nodes stay strictly inside the ball.
Field2D radial_quadrant_patch(const RadialSolution& s, double depth, double margin, int nx,
                              int ny);

// Sup norm over interior nodes of div(grad u / sqrt(1+|grad u|^2)) + f(u),
// all derivatives by centered differences.
double field_pde_residual(const Field2D& f, const ScalarFn& reaction);

}  // namespace caplab
