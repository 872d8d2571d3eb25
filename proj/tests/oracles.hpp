#pragma once

// Independent numerical oracles used only by the tests: an axis-angle
// rotation built from Eigen's own geometry module, and a classic RK4
// integration of the modulated rotating-frame dynamics dJ/dpsi = n(psi) x J.

#include <Eigen/Geometry>
#include <cmath>
#include <random>

#include "blochnoise/rotations.hpp"

namespace oracles {

inline blochnoise::RotationMatrix angle_axis_rotation(double phi_r, double psi) {
  const Eigen::Vector3d axis(std::cos(phi_r), std::sin(phi_r), 0.0);
  return Eigen::AngleAxisd(psi, axis).toRotationMatrix();
}

inline blochnoise::RotationMatrix angle_axis_z(double phi) {
  return Eigen::AngleAxisd(phi, Eigen::Vector3d::UnitZ()).toRotationMatrix();
}

// Final Bloch vector after a pulse of angle psi about the in-plane axis at
// angle beta*sin(x*s + alpha_m), integrated with fixed-step RK4 from
// J(0) = x-hat.  Step error is O(h^4); n_steps = 4096 per 2*pi is far below
// every tolerance the tests use.
inline blochnoise::BlochVector rk4_modulated_trajectory(double psi, double x,
                                                        double beta,
                                                        double alpha_m,
                                                        long n_steps) {
  using blochnoise::BlochVector;
  auto deriv = [&](double s, const BlochVector& j) -> BlochVector {
    const double phi = beta * std::sin(x * s + alpha_m);
    const BlochVector n(std::cos(phi), std::sin(phi), 0.0);
    return n.cross(j);
  };
  BlochVector j(1, 0, 0);
  const double h = psi / static_cast<double>(n_steps);
  for (long k = 0; k < n_steps; ++k) {
    const double s0 = k * h;
    const BlochVector k1 = deriv(s0, j);
    const BlochVector k2 = deriv(s0 + h / 2, j + (h / 2) * k1);
    const BlochVector k3 = deriv(s0 + h / 2, j + (h / 2) * k2);
    const BlochVector k4 = deriv(s0 + h, j + h * k3);
    j += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return j;
}

}  // namespace oracles
