#pragma once

#include <functional>
#include <vector>

namespace caplab {

using ScalarFn = std::function<double(double)>;

// Adaptive Simpson on [a, b]. Throws Error(Tolerance) when the recursion
// bottoms out without meeting tol.
double integrate(const ScalarFn& f, double a, double b, double tol = 1e-12);

// Adaptive Simpson that additionally records the cumulative integral at the
// accepted panel boundaries: points (x_k, I(x_k)) with x_0 = a, I(a) = 0.
// Output is strictly increasing in x.
struct CumulativeQuadrature {
  std::vector<double> x;
  std::vector<double> integral;
};
CumulativeQuadrature integrate_cumulative(const ScalarFn& f, double a, double b,
                                          double tol = 1e-12);

// Fixed 5-point Gauss-Legendre rule on [a, b]; no tolerance, deterministic.
double gauss_legendre_5(const ScalarFn& f, double a, double b);

// Composite Simpson over tabulated samples (uniform grid, any count >= 2;
// a trapezoid correction handles the last interval when the count is even).
double simpson_tabulated(const std::vector<double>& y, double h);

}  // namespace caplab
