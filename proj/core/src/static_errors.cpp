#include "blochnoise/static_errors.hpp"

#include <cmath>
#include <stdexcept>

namespace blochnoise {

RotationMatrix rotation_with_errors(double phi_r, double psi,
                                    const StaticError& err) {
  const double norm = std::sqrt(1.0 + err.delta * err.delta);
  const double nx = std::cos(phi_r) / norm;
  const double ny = std::sin(phi_r) / norm;
  const double nz = err.delta / norm;
  const double angle = psi * (1.0 + err.epsilon);
  const double c = std::cos(angle), s = std::sin(angle), v = 1.0 - c;
  RotationMatrix r;
  r << c + nx * nx * v, nx * ny * v - nz * s, nx * nz * v + ny * s,
      ny * nx * v + nz * s, c + ny * ny * v, ny * nz * v - nx * s,
      nz * nx * v - ny * s, nz * ny * v + nx * s, c + nz * nz * v;
  return r;
}

StaticErrorMetrics static_error_metrics(const PulseSequence& seq,
                                        const BlochVector& j_i,
                                        const StaticError& err) {
  if (seq.steps.empty()) throw std::invalid_argument("static_error_metrics: no steps");
  if (std::abs(j_i.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("static_error_metrics: initial vector must be unit norm");
  }
  BlochVector j_ideal = j_i, j_actual = j_i;
  for (const auto& step : seq.steps) {
    j_ideal = axis_xy_rotation(step.phi, step.psi) * j_ideal;
    j_actual = rotation_with_errors(step.phi, step.psi, err) * j_actual;
  }
  StaticErrorMetrics m;
  m.deflection = j_actual - j_ideal;
  m.w_zz = m.deflection.z() * m.deflection.z();
  m.infidelity = m.deflection.squaredNorm() / 4.0;
  return m;
}

CancellationFit cancellation_order(const PulseSequence& seq,
                                   const BlochVector& j_i, ErrorChannel which,
                                   ErrorMetric metric, double sweep_floor,
                                   int sweep_points) {
  if (sweep_points < 3) throw std::invalid_argument("cancellation_order: need >= 3 sweep points");
  if (!(sweep_floor > 0)) throw std::invalid_argument("cancellation_order: sweep_floor must be > 0");

  CancellationFit fit;
  for (int k = 0; k < sweep_points; ++k) {
    const double e = sweep_floor * std::pow(2.0, k);
    const StaticError err = which == ErrorChannel::amplitude
                                ? StaticError{e, 0.0}
                                : StaticError{0.0, e};
    const StaticErrorMetrics m = static_error_metrics(seq, j_i, err);
    fit.errors.push_back(e);
    fit.metrics.push_back(metric == ErrorMetric::w_zz ? m.w_zz : m.infidelity);
  }

  fit.exact = true;
  for (double v : fit.metrics) {
    if (v >= exact_cancellation_threshold) fit.exact = false;
  }
  if (fit.exact) return fit;

  // Least squares of log10(metric) on log10(error); rounding uses the metric
  // scaling, which is quadratic in the deflection, hence even orders.
  const int n = sweep_points;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(n), ly(n);
  for (int k = 0; k < n; ++k) {
    lx[k] = std::log10(fit.errors[k]);
    ly[k] = std::log10(std::max(fit.metrics[k], 1e-300));
    sx += lx[k];
    sy += ly[k];
    sxx += lx[k] * lx[k];
    sxy += lx[k] * ly[k];
  }
  const double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.slope * sx) / n;
  double ss = 0;
  for (int k = 0; k < n; ++k) {
    const double r = ly[k] - (fit.slope * lx[k] + intercept);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.order = static_cast<int>(2.0 * std::round(fit.slope / 2.0));
  return fit;
}

}  // namespace blochnoise
