#include "blochnoise/deflection.hpp"

#include <cmath>
#include <stdexcept>

namespace blochnoise {

namespace {

// Each amplitude is n(x)/(1-x^2) with n(1) = 0, so near x = 1 it equals
// -(n'(1) + n''(1) h/2 + n'''(1) h^2/6) / (2 + h) with h = x - 1.
double series(double n1, double n2, double n3, double h) {
  return -(n1 + 0.5 * n2 * h + n3 * h * h / 6.0) / (2.0 + h);
}

}  // namespace

DeflectionBasis deflection_basis(double psi, double x) {
  const double h = x - 1.0;
  const double s = std::sin(psi), c = std::cos(psi);
  if (std::abs(h) < resonance_window) {
    const double p = psi, p2 = psi * psi, p3 = p2 * psi;
    return {series(p * c - s, -p2 * s, -p3 * c, h),
            series(-p * s, -p2 * c, p3 * s, h),
            series(p * s, 2 * p * s + p2 * c, 3 * p2 * c - p3 * s, h),
            series(s + p * c, 2 * p * c - p2 * s, -3 * p2 * s - p3 * c, h)};
  }
  const double d = 1.0 - x * x;
  const double sx = std::sin(x * psi), cx = std::cos(x * psi);
  return {(sx - x * s) / d, (cx - c) / d, x * (c - cx) / d, (x * sx - s) / d};
}

Deflection deflection_special(double psi, double x, double beta,
                              double alpha_m) {
  const DeflectionBasis b = deflection_basis(psi, x);
  const double ca = std::cos(alpha_m), sa = std::sin(alpha_m);
  return {beta * (b.ay * ca + b.by * sa), beta * (b.az * ca + b.bz * sa)};
}

DeflectResult deflect_general(const BlochVector& j_i, double phi_r, double psi,
                              double beta, double x, double alpha_m) {
  if (!j_i.allFinite() || !std::isfinite(phi_r) || !std::isfinite(psi) ||
      !std::isfinite(beta) || !std::isfinite(x) || !std::isfinite(alpha_m)) {
    throw std::invalid_argument("deflect_general: non-finite input");
  }
  if (psi < 0 || x < 0) {
    throw std::invalid_argument("deflect_general: psi and x must be >= 0");
  }
  const Deflection d = deflection_special(psi, x, beta, alpha_m);
  DeflectResult out;
  out.ideal = axis_xy_rotation(phi_r, psi) * j_i;
  out.final = small_rotation(phi_r, d.jy, d.jz) * out.ideal;
  out.deflection = out.final - out.ideal;
  return out;
}

}  // namespace blochnoise
