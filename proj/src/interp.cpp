#include "caplab/interp.hpp"

#include <algorithm>
#include <cmath>

#include "caplab/errors.hpp"

namespace caplab {

double hermite(double x, double x0, double x1, double y0, double y1, double m0, double m1) {
  double h = x1 - x0;
  double t = (x - x0) / h;
  double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * m0 +
         (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * m1;
}

double hermite_deriv(double x, double x0, double x1, double y0, double y1, double m0,
                     double m1) {
  double h = x1 - x0;
  double t = (x - x0) / h;
  double t2 = t * t;
  return ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * h * m0 + (-6 * t2 + 6 * t) * y1 +
          (3 * t2 - 2 * t) * h * m1) /
         h;
}

double quintic_hermite(double x, double x0, double x1, double y0, double y1, double m0,
                       double m1, double c0, double c1) {
  double h = x1 - x0;
  double t = (x - x0) / h;
  double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  double a0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  double a1 = t - 6 * t3 + 8 * t4 - 3 * t5;
  double a2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
  double b0 = 10 * t3 - 15 * t4 + 6 * t5;
  double b1 = -4 * t3 + 7 * t4 - 3 * t5;
  double b2 = 0.5 * (t3 - 2 * t4 + t5);
  return a0 * y0 + a1 * h * m0 + a2 * h * h * c0 + b0 * y1 + b1 * h * m1 + b2 * h * h * c1;
}

double quintic_hermite_deriv(double x, double x0, double x1, double y0, double y1,
                             double m0, double m1, double c0, double c1) {
  double h = x1 - x0;
  double t = (x - x0) / h;
  double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
  double a0 = -30 * t2 + 60 * t3 - 30 * t4;
  double a1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
  double a2 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4);
  double b0 = 30 * t2 - 60 * t3 + 30 * t4;
  double b1 = -12 * t2 + 28 * t3 - 15 * t4;
  double b2 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4);
  return (a0 * y0 + a1 * h * m0 + a2 * h * h * c0 + b0 * y1 + b1 * h * m1 +
          b2 * h * h * c1) /
         h;
}

double hermite_integral(double x, double x0, double x1, double y0, double y1, double m0,
                        double m1) {
  double h = x1 - x0;
  double t = (x - x0) / h;
  double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
  // antiderivatives of the Hermite basis in t, scaled by h
  double b0 = 0.5 * t4 - t3 + t;            // from 2t^3 - 3t^2 + 1
  double b1 = 0.25 * t4 - (2.0 / 3.0) * t3 + 0.5 * t2;  // from t^3 - 2t^2 + t
  double b2 = -0.5 * t4 + t3;               // from -2t^3 + 3t^2
  double b3 = 0.25 * t4 - t3 / 3.0;         // from t^3 - t^2
  return h * (b0 * y0 + b1 * h * m0 + b2 * y1 + b3 * h * m1);
}

namespace {

std::vector<double> fritsch_carlson_slopes(const std::vector<double>& x,
                                           const std::vector<double>& y) {
  size_t n = x.size();
  std::vector<double> d(n - 1), m(n);
  for (size_t i = 0; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
  m[0] = d[0];
  m[n - 1] = d[n - 2];
  for (size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0) {
      m[i] = 0.0;
    } else {
      double w1 = 2.0 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
      double w2 = (x[i + 1] - x[i]) + 2.0 * (x[i] - x[i - 1]);
      m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
  }
  // limiter to preserve monotonicity
  for (size_t i = 0; i + 1 < n; ++i) {
    if (d[i] == 0.0) {
      m[i] = m[i + 1] = 0.0;
    } else {
      double a = m[i] / d[i], b = m[i + 1] / d[i];
      double s = a * a + b * b;
      if (s > 9.0) {
        double tau = 3.0 / std::sqrt(s);
        m[i] = tau * a * d[i];
        m[i + 1] = tau * b * d[i];
      }
    }
  }
  return m;
}

size_t locate_in(const std::vector<double>& xs, double x) {
  if (x <= xs.front()) return 0;
  if (x >= xs[xs.size() - 2]) return xs.size() - 2;
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  return static_cast<size_t>(it - xs.begin()) - 1;
}

void check_grid(const std::vector<double>& x, size_t ny) {
  if (x.size() < 2 || x.size() != ny)
    throw Error(ErrorKind::InvalidInput, "interpolant needs >= 2 matched samples");
  for (size_t i = 0; i + 1 < x.size(); ++i)
    if (!(x[i] < x[i + 1]))
      throw Error(ErrorKind::InvalidInput, "interpolant abscissae must be strictly increasing");
}

}  // namespace

PchipInterpolant::PchipInterpolant(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  check_grid(x_, y_.size());
  m_ = fritsch_carlson_slopes(x_, y_);
}

size_t PchipInterpolant::locate(double x) const { return locate_in(x_, x); }

double PchipInterpolant::eval(double x) const {
  if (x <= x_.front()) return y_.front() + m_.front() * (x - x_.front());
  if (x >= x_.back()) return y_.back() + m_.back() * (x - x_.back());
  size_t i = locate(x);
  return hermite(x, x_[i], x_[i + 1], y_[i], y_[i + 1], m_[i], m_[i + 1]);
}

double PchipInterpolant::deriv(double x) const {
  if (x <= x_.front()) return m_.front();
  if (x >= x_.back()) return m_.back();
  size_t i = locate(x);
  return hermite_deriv(x, x_[i], x_[i + 1], y_[i], y_[i + 1], m_[i], m_[i + 1]);
}

HermiteInterpolant::HermiteInterpolant(std::vector<double> x, std::vector<double> y,
                                       std::vector<double> slope)
    : x_(std::move(x)), y_(std::move(y)), m_(std::move(slope)) {
  check_grid(x_, y_.size());
  if (m_.size() != x_.size())
    throw Error(ErrorKind::InvalidInput, "slope count must match sample count");
}

size_t HermiteInterpolant::locate(double x) const { return locate_in(x_, x); }

double HermiteInterpolant::eval(double x) const {
  if (x <= x_.front()) return y_.front() + m_.front() * (x - x_.front());
  if (x >= x_.back()) return y_.back() + m_.back() * (x - x_.back());
  size_t i = locate(x);
  return hermite(x, x_[i], x_[i + 1], y_[i], y_[i + 1], m_[i], m_[i + 1]);
}

double HermiteInterpolant::deriv(double x) const {
  if (x <= x_.front()) return m_.front();
  if (x >= x_.back()) return m_.back();
  size_t i = locate(x);
  return hermite_deriv(x, x_[i], x_[i + 1], y_[i], y_[i + 1], m_[i], m_[i + 1]);
}

}  // namespace caplab
