#pragma once

#include <vector>

namespace caplab {

// Cubic Hermite evaluation on [x0, x1] with values y0, y1 and slopes m0, m1.
double hermite(double x, double x0, double x1, double y0, double y1, double m0, double m1);
double hermite_deriv(double x, double x0, double x1, double y0, double y1, double m0,
                     double m1);
// Exact integral of the Hermite cubic from x0 to x.
double hermite_integral(double x, double x0, double x1, double y0, double y1, double m0,
                        double m1);

// Quintic Hermite on [x0, x1] matching value, slope, and curvature at both
// ends; the extra smoothness keeps second differences of the interpolant
// meaningful between nodes.
double quintic_hermite(double x, double x0, double x1, double y0, double y1, double m0,
                       double m1, double c0, double c1);
double quintic_hermite_deriv(double x, double x0, double x1, double y0, double y1,
                             double m0, double m1, double c0, double c1);

// Monotone cubic interpolant (Fritsch-Carlson) over strictly increasing x.
class PchipInterpolant {
 public:
  PchipInterpolant() = default;
  PchipInterpolant(std::vector<double> x, std::vector<double> y);

  double eval(double x) const;        // clamped-extrapolated linearly outside
  double deriv(double x) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  bool empty() const { return x_.empty(); }

 private:
  size_t locate(double x) const;
  std::vector<double> x_, y_, m_;  // node slopes m_
};

// Hermite interpolant with caller-supplied slopes (C1, not forced monotone).
class HermiteInterpolant {
 public:
  HermiteInterpolant() = default;
  HermiteInterpolant(std::vector<double> x, std::vector<double> y, std::vector<double> slope);

  double eval(double x) const;
  double deriv(double x) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  size_t locate(double x) const;
  std::vector<double> x_, y_, m_;
};

}  // namespace caplab
