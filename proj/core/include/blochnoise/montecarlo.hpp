#pragma once

#include <cstdint>

#include "blochnoise/covariance.hpp"
#include "blochnoise/sequences.hpp"

namespace blochnoise {

struct McConfig {
  long long n_samples = 10000;     // >= 100
  int steps_per_rabi_cycle = 64;   // >= 16
  std::uint64_t seed = 0;
  bool antithetic = true;   // tone estimator only: quadrature-phase pairing
  double sigma_beta = 1e-3; // tone modulation depth scale, rad
  int workers = 1;          // <= 0 selects hardware concurrency
};

struct McEstimate {
  CovarianceMatrix mean_matrix = CovarianceMatrix::Zero();
  CovarianceMatrix standard_error_matrix = CovarianceMatrix::Zero();
  long long n_samples = 0;  // trajectories actually propagated
};

// Deterministic single-trajectory propagation: J_i = x-hat stepped through
// K = ceil(steps_per_rabi_cycle * psi / 2pi) exact rotations about the
// in-plane axis at angle beta * sin(x * psi_mid + alpha), each through
// psi / K, with psi_mid the midpoint of the step.  Returns J_final - x-hat.
BlochVector tone_trajectory(double psi, double x, double beta, double alpha,
                            int steps_per_rabi_cycle);

// Empirical transfer matrix: samples alpha ~ U[0, 2pi), beta ~ N(0,
// sigma_beta), accumulates 4 <j j^T> / sigma_beta^2.  With antithetic
// pairing each draw is propagated at alpha and alpha + pi/2; the pair mean
// is exact in alpha for the quadratic estimator, leaving only the beta
// spread, so pairs count as the independent units for the standard error.
McEstimate mc_tone_transfer(double psi, double x, const McConfig& cfg);

// Empirical white-noise covariance of the final deflection: per pulse the
// time step is 1/(f_r * steps_per_rabi_cycle) and each step's axis angle is
// phi_k + phi_n with phi_n ~ N(0, l0 / dt); delays apply the identity.
McEstimate mc_white_noise(const PulseSequence& seq, const BlochVector& j_i,
                          double l0, const McConfig& cfg);

// Systematic floor for z-scores of mc_tone_transfer against analytic values:
// the quadratic estimator carries an O(sigma_beta^2) higher-order-response
// bias, so comparisons should use sqrt(se^2 + floor^2) with this floor.  The
// fourth-order response grows like trace^2 on resonance, where it dominates
// entries whose analytic value vanishes; 2 sigma^2 (1 + tr + tr^2) bounds
// the measured bias across psi <= 4 pi, x <= 3 with >= 2x margin.
double tone_z_floor(const CovarianceMatrix& analytic, double sigma_beta);

// Same role for mc_white_noise.  Two systematic terms sit outside the
// first-order analytic matrix: an O(trace^2) sphere-curvature bias (the
// deflection is pulled back along the ideal vector by half its squared
// transverse spread), and a second-order response proportional to the total
// in-band axis-angle power sigma2_total = sum_k l0 / dt_k over all steps of
// one trajectory, which dominates entries whose first-order response
// vanishes exactly.  2 trace^2 + trace * sigma2_total bounds both with
// >= 1.8x margin.
double white_z_floor(const CovarianceMatrix& analytic, double sigma2_total);

// sigma2_total for mc_white_noise's stepping of `seq` at the given noise
// level and resolution: steps_per_rabi_cycle * f_r * l0 per step, summed
// over ceil(steps_per_rabi_cycle * psi_k / 2pi) steps per pulse.
double white_sigma2_total(const PulseSequence& seq, double l0,
                          int steps_per_rabi_cycle);

}  // namespace blochnoise
