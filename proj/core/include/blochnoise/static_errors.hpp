#pragma once

#include <vector>

#include "blochnoise/rotations.hpp"
#include "blochnoise/sequences.hpp"

namespace blochnoise {

// Static control errors: fractional amplitude error epsilon (the rotation
// angle becomes psi * (1 + epsilon)) and fractional detuning delta (the
// rotation axis tilts to (cos phi_r, sin phi_r, delta) / sqrt(1 + delta^2);
// the angle is not rescaled by the tilt).
struct StaticError {
  double epsilon = 0;
  double delta = 0;
};

RotationMatrix rotation_with_errors(double phi_r, double psi,
                                    const StaticError& err);

// Deterministic end-of-sequence deviation: deflection = J_f - J_f_ideal,
// w_zz = (deflection_z)^2, infidelity = |deflection|^2 / 4.  Delays are
// ignored (static phase errors act only during pulses).
struct StaticErrorMetrics {
  BlochVector deflection = BlochVector::Zero();
  double w_zz = 0;
  double infidelity = 0;
};

StaticErrorMetrics static_error_metrics(const PulseSequence& seq,
                                        const BlochVector& j_i,
                                        const StaticError& err);

enum class ErrorChannel { amplitude, detuning };
enum class ErrorMetric { w_zz, infidelity };

// Every sweep value below this is treated as exact cancellation (the metric
// vanishes to all orders, up to rounding).
inline constexpr double exact_cancellation_threshold = 1e-28;

struct CancellationFit {
  bool exact = false;   // all sweep values below exact_cancellation_threshold
  int order = 0;        // leading even power of the error (0 when exact)
  double slope = 0;     // raw log-log least-squares slope
  double residual = 0;  // rms residual of the fit, decades
  std::vector<double> errors;   // swept error magnitudes
  std::vector<double> metrics;  // metric at each error
};

// Sweeps err = floor * 2^k for k = 0..points-1 on the selected channel,
// fits log(metric) against log(err), and rounds the slope to the nearest
// even integer.
CancellationFit cancellation_order(const PulseSequence& seq,
                                   const BlochVector& j_i, ErrorChannel which,
                                   ErrorMetric metric, double sweep_floor = 1e-3,
                                   int sweep_points = 7);

}  // namespace blochnoise
