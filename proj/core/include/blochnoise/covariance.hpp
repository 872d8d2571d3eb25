#pragma once

#include <Eigen/Core>

#include "blochnoise/rotations.hpp"
#include "blochnoise/spectra.hpp"

namespace blochnoise {

using CovarianceMatrix = Eigen::Matrix3d;

// Transfer matrix T~(psi, x), the covariance of the special-case deflection
// per unit one-sided phase noise power: for a tone of depth beta at x,
// <j j^T> over the modulation phase is (beta^2 / 4) * T~.  Rows and columns
// are ordered (x, y, z); the x row and column vanish.
CovarianceMatrix transfer_tilde(double psi, double x);

// V = G * V~ * G^T with G = geometry_transform(phi_r, j_final).
CovarianceMatrix transform_covariance(const CovarianceMatrix& v_tilde,
                                      double phi_r, const BlochVector& j_final);

// Closed form of the white-noise deflection covariance per unit L0:
// pi * f_r * sgn(psi) * {0,0,0; 0, psi - sin(2 psi)/2, -sin^2 psi;
//                        0, -sin^2 psi, psi + sin(2 psi)/2}.
CovarianceMatrix neb_matrix(double psi, double f_r);

struct NoiseIntegralOptions {
  double f_low = 0;    // Hz; low-frequency cutoff (required when the spectrum
                       // diverges at f = 0)
  double x_max = 200;  // truncation of x = f_m / f_r for the quadrature
  bool extrapolate_tabulated = false;  // extend tabulated spectra flat beyond
                                       // their knots instead of clipping
};

struct NoiseIntegral {
  CovarianceMatrix matrix = CovarianceMatrix::Zero();  // rad^2, tail included
  CovarianceMatrix tail = CovarianceMatrix::Zero();    // estimated x > x_max part
  bool extrapolated = false;  // tabulated values were used outside the knots
};

// Adaptive quadrature of T~(psi, x) * L(x f_r) * f_r over x in
// (f_low/f_r, x_max], plus an analytic entrywise tail for x > x_max using the
// large-x envelope T~ -> {0, 2 sin^2 psi, -sin 2 psi; ., 2(1 + cos^2 psi)}/x^2.
// Tone spectra are rejected (no density).  Power-law terms with k >= 1
// require options.f_low > 0.
NoiseIntegral noise_matrix_quadrature(const PhaseNoiseSpectrum& spec, double psi,
                                      double f_r,
                                      const NoiseIntegralOptions& opts = {});

// V~ = int_0^inf T~(psi, f_m/f_r) L(f_m) df_m, dispatching to exact forms:
// white -> L0 * neb_matrix, tones -> sum of (beta_sq/4) T~(psi, f0/f_r),
// otherwise the quadrature above.
NoiseIntegral noise_matrix_tilde(const PhaseNoiseSpectrum& spec, double psi,
                                 double f_r,
                                 const NoiseIntegralOptions& opts = {});

// Large-angle limit: V~ -> pi * f_r * |psi| * L(f_r) * diag(0, 1, 1).  Tone
// spectra contribute only a tone exactly at f_r; otherwise the result is zero
// and the warning flag is set.
struct LargePsiResult {
  CovarianceMatrix matrix = CovarianceMatrix::Zero();
  bool no_density_warning = false;
};

LargePsiResult noise_matrix_large_psi(const PhaseNoiseSpectrum& spec,
                                      double psi, double f_r);

// n^T V n for a unit direction n (throws if |n| deviates from 1 by > 1e-9).
double project_variance(const CovarianceMatrix& v, const BlochVector& n);

}  // namespace blochnoise
