#pragma once

#include "freelevy/inversion.hpp"

namespace freelevy {

// Integral over [ta, tb] of G(t) P'(t), with G and P the quadratics through the nodes t[0..2].
double quad_piece(const double* t, const double* P, const double* G, double ta, double tb);

// Integral of weight(psi) * f(psi) dpsi over the sampled components, using quadratic
// interpolation of psi and f in the component parameter and a power-law rule next to
// endpoints where the density is undefined.
double curve_integral(const DensityCurve& c, const RealFn& weight);

// Mass of the absolutely continuous part inside the window image.
double window_mass(const DensityCurve& c);

// Window mass plus the mass beyond the window computed from boundary values.
double curve_mass(const DensityCurve& c);

}  // namespace freelevy
