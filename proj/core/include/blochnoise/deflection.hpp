#pragma once

#include "blochnoise/rotations.hpp"

namespace blochnoise {

// Half-width of the near-resonant window in x = f_m / f_R inside which the
// quadrature amplitudes switch to a second-order expansion about x = 1,
// avoiding cancellation in the 1/(1 - x^2) prefactor.
inline constexpr double resonance_window = 1e-4;

// Quadrature amplitudes of the first-order transverse deflection after a
// pulse of angle psi under axis-angle modulation beta * sin(x * psi' +
// alpha_m):  jy = beta * (ay cos a + by sin a), jz = beta * (az cos a +
// bz sin a).  All four amplitudes are continuous across x = 1.
struct DeflectionBasis {
  double ay = 0;
  double by = 0;
  double az = 0;
  double bz = 0;
};

DeflectionBasis deflection_basis(double psi, double x);

struct Deflection {
  double jy = 0;
  double jz = 0;
};

// First-order deflection for the special case J_i = x-hat, mean axis along x.
// The x = 1 singularity of the direct form is removable and handled by the
// windowed series; no error is ever raised for it.
Deflection deflection_special(double psi, double x, double beta,
                              double alpha_m);

// General geometry: J_f_ideal = axis_xy_rotation(phi_r, psi) * J_i, the
// deflection is (small_rotation(phi_r, jy, jz) - I) * J_f_ideal, and
// final = ideal + deflection.
struct DeflectResult {
  BlochVector ideal = BlochVector::Zero();
  BlochVector deflection = BlochVector::Zero();
  BlochVector final = BlochVector::Zero();
};

DeflectResult deflect_general(const BlochVector& j_i, double phi_r, double psi,
                              double beta, double x, double alpha_m);

}  // namespace blochnoise
