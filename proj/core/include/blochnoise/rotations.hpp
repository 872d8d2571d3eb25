#pragma once

#include <Eigen/Core>

namespace blochnoise {

using BlochVector = Eigen::Vector3d;
using RotationMatrix = Eigen::Matrix3d;

// Right-handed rotation through psi about the in-plane axis
// (cos(phi_r), sin(phi_r), 0).
RotationMatrix axis_xy_rotation(double phi_r, double psi);

// Right-handed rotation through phi about z.
RotationMatrix z_rotation(double phi);

// Rigid first-order rotation equivalent to small transverse deflections
// (jy, jz) acquired during a pulse about the axis at angle phi_r:
// R_z(phi_r) * r0 * R_z(-phi_r), with r0 rows {1,-jy,-jz; jy,1,0; jz,0,1}.
RotationMatrix small_rotation(double phi_r, double jy, double jz);

// Linear map taking special-case deflection covariance (initial vector on the
// x axis, rotation axis along x) to an arbitrary axis angle phi_r and ideal
// final vector jf: V = G * V_special * G^T.  First column is zero because the
// special-case covariance has no x content.
Eigen::Matrix3d geometry_transform(double phi_r, const BlochVector& jf);

}  // namespace blochnoise
