#pragma once

#include "caplab/reaction.hpp"

namespace caplab {

// Physical capillary data. The normalized problem sees only
//   b = (rho - rho0) g / sigma    and    kappa = -cot(theta).
struct CapillarySetup {
  double rho = 1000.0;   // liquid density
  double rho0 = 1.2;     // gas density
  double sigma = 0.072;  // surface tension
  double g = 9.81;       // gravity
  double theta = 0.0;    // wetting angle, radians in (0, pi/2]
};

// Throws Error(InvalidInput) when the setup is unphysical. to_reaction
// additionally rejects theta = pi/2 (kappa would vanish); plate_rise_height
// accepts it and returns zero rise.
void validate(const CapillarySetup& c);

double bond_parameter(const CapillarySetup& c);   // b
double contact_slope(const CapillarySetup& c);    // kappa = -cot(theta) < 0
double rise_coefficient(const CapillarySetup& c); // c_h = sqrt(2(1 - sin theta)/b)

// Linear capillary term f(v) = b (c_h - v) with c_h chosen so the primitive
// vanishes exactly at L = c_h; passes the admissibility battery.
ReactionTerm to_reaction(const CapillarySetup& c);

struct RiseHeight {
  double height = 0.0;            // closed form, equals the asymptotic level L
  double profile_terminal = 0.0;  // terminal value of the integrated profile
  double discrepancy = 0.0;
};

// Closed-form plate rise cross-checked against the quadrature profile.
RiseHeight plate_rise_height(const CapillarySetup& c);

}  // namespace caplab
