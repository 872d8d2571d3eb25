#include "blochnoise/rotations.hpp"

#include <cmath>

namespace blochnoise {

RotationMatrix axis_xy_rotation(double phi_r, double psi) {
  const double ca = std::cos(phi_r), sa = std::sin(phi_r);
  const double c = std::cos(psi), s = std::sin(psi);
  const double v = 1.0 - c;
  // Rodrigues form for the unit axis n = (ca, sa, 0).
  RotationMatrix r;
  r << c + ca * ca * v, ca * sa * v, sa * s,
      ca * sa * v, c + sa * sa * v, -ca * s,
      -sa * s, ca * s, c;
  return r;
}

RotationMatrix z_rotation(double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  RotationMatrix r;
  r << c, -s, 0,
      s, c, 0,
      0, 0, 1;
  return r;
}

RotationMatrix small_rotation(double phi_r, double jy, double jz) {
  RotationMatrix r0;
  r0 << 1, -jy, -jz,
      jy, 1, 0,
      jz, 0, 1;
  return z_rotation(phi_r) * r0 * z_rotation(-phi_r);
}

Eigen::Matrix3d geometry_transform(double phi_r, const BlochVector& jf) {
  const double c = std::cos(phi_r), s = std::sin(phi_r);
  Eigen::Matrix3d g;
  g << 0, -jf.y(), -jf.z() * c,
      0, jf.x(), -jf.z() * s,
      0, 0, jf.x() * c + jf.y() * s;
  return g;
}

}  // namespace blochnoise
