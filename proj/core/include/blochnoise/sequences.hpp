#pragma once

#include <vector>

#include "blochnoise/covariance.hpp"
#include "blochnoise/rotations.hpp"

namespace blochnoise {

struct RotationStep {
  double phi = 0;           // axis azimuthal angle, rad
  double psi = 0;           // rotation angle, rad, >= 0
  double delay_before = 0;  // free evolution preceding the pulse, s (>= 0)
};

struct PulseSequence {
  std::vector<RotationStep> steps;  // execution order, first pulse first
  double f_r = 0;                   // Rabi frequency, Hz

  double total_angle() const;  // sum of |psi| over steps
};

enum class SequenceKind { single_pi, corpse_pi, scrofulous_pi, bb1_pi, spin_echo };
enum class EchoVariant { fixed_axis, alternating };

// arccos(-1/4), the composite phase of the four-pulse broadband sequence.
extern const double bb1_phase;

// Composite pi rotations about the nominal x axis (kind != spin_echo).
PulseSequence build_sequence(SequenceKind kind, double f_r);

// n pi pulses about x (fixed_axis) or alternating x/-x, delays
// tau, 2 tau, ..., 2 tau between pulses (no trailing delay).
PulseSequence build_spin_echo(int n_pulses, double tau, EchoVariant variant,
                              double f_r);

struct PropagationResult {
  std::vector<BlochVector> ideal;       // J_k after each pulse
  std::vector<CovarianceMatrix> noise;  // W_k after each pulse, rad^2
  const BlochVector& final_ideal() const { return ideal.back(); }
  const CovarianceMatrix& final_noise() const { return noise.back(); }
};

// White-noise covariance recursion W_k = R_k W_{k-1} R_k^T + V_k, with V_k the
// per-pulse deflection covariance transformed to the running geometry.  Delays
// rotate nothing and add no noise under phase noise alone; they are retained
// in the data model only.  j_i must be unit norm.
PropagationResult propagate_noise(const BlochVector& j_i,
                                  const PulseSequence& seq, double l0);

struct FidelityMetrics {
  double infidelity = 0;          // tr(W_N) / 4 for this initial state
  double average_infidelity = 0;  // sphere average: Psi * pi * f_r * l0 / 3
};

FidelityMetrics fidelity_metrics(const PropagationResult& result,
                                 const PulseSequence& seq, double l0);

// Initial Bloch vector from elevation theta (from the x-y plane) and azimuth
// phi (from x): (cos t cos p, cos t sin p, sin t).
BlochVector bloch_from_angles(double theta_i, double phi_i);

// Closed-form white-noise covariance after the sequence, per initial state.
// echo_n applies to spin_echo only (both variants share this form).
CovarianceMatrix closed_form_noise(SequenceKind kind, double theta_i,
                                   double phi_i, double f_r, double l0,
                                   int echo_n = 1);
double closed_form_infidelity(SequenceKind kind, double theta_i, double phi_i,
                              double f_r, double l0, int echo_n = 1);
CovarianceMatrix spin_echo_noise(int n_pulses, const BlochVector& j_i,
                                 double f_r, double l0);

}  // namespace blochnoise
