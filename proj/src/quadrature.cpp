#include "caplab/quadrature.hpp"

#include <cmath>

#include "caplab/errors.hpp"

namespace caplab {

namespace {

struct AdaptiveState {
  const ScalarFn* f;
  CumulativeQuadrature* cum;  // optional
  int max_depth;
};

double recurse(const AdaptiveState& st, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth, double offset) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = (*st.f)(lm), frm = (*st.f)(rm);
  if (!std::isfinite(flm) || !std::isfinite(frm))
    throw Error(ErrorKind::InvalidInput, "non-finite integrand at x=" + std::to_string(lm));
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double err = left + right - whole;
  if (depth >= st.max_depth)
    throw Error(ErrorKind::Tolerance, "adaptive quadrature did not converge on [" +
                                          std::to_string(a) + ", " + std::to_string(b) + "]");
  if (std::abs(err) <= 15.0 * tol || (b - a) < 1e-14 * (1.0 + std::abs(a))) {
    double value = left + right + err / 15.0;
    if (st.cum) {
      double half = left + 0.5 * err / 15.0;
      st.cum->x.push_back(m);
      st.cum->integral.push_back(offset + half);
      st.cum->x.push_back(b);
      st.cum->integral.push_back(offset + value);
    }
    return value;
  }
  double lv = recurse(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, offset);
  double rv = recurse(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, offset + lv);
  return lv + rv;
}

double run(const AdaptiveState& st, double a, double b, double tol) {
  double fa = (*st.f)(a), fb = (*st.f)(b), fm = (*st.f)(0.5 * (a + b));
  if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm))
    throw Error(ErrorKind::InvalidInput, "non-finite integrand on interval endpoints");
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return recurse(st, a, b, fa, fm, fb, whole, tol, 0, 0.0);
}

}  // namespace

double integrate(const ScalarFn& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  double sign = 1.0;
  if (a > b) { std::swap(a, b); sign = -1.0; }
  AdaptiveState st{&f, nullptr, 48};
  return sign * run(st, a, b, tol);
}

CumulativeQuadrature integrate_cumulative(const ScalarFn& f, double a, double b, double tol) {
  CumulativeQuadrature cum;
  cum.x.push_back(a);
  cum.integral.push_back(0.0);
  if (a == b) return cum;
  AdaptiveState st{&f, &cum, 48};
  run(st, a, b, tol);
  return cum;
}

double gauss_legendre_5(const ScalarFn& f, double a, double b) {
  static const double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
  static const double ws[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                               0.4786286704993665, 0.2369268850561891};
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += ws[i] * f(c + h * xs[i]);
  return h * s;
}

double simpson_tabulated(const std::vector<double>& y, double h) {
  size_t n = y.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * h * (y[0] + y[1]);
  double total = 0.0;
  size_t last = n - 1;
  size_t simpson_end = (last % 2 == 0) ? last : last - 1;
  for (size_t i = 0; i + 2 <= simpson_end; i += 2)
    total += h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
  if (simpson_end != last) {
    // last interval by 3-point end correction (quadratic through the tail)
    total += h * (5.0 * y[last] + 8.0 * y[last - 1] - y[last - 2]) / 12.0;
  }
  return total;
}

}  // namespace caplab
