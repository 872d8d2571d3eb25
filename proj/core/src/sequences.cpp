#include "blochnoise/sequences.hpp"

#include <cmath>
#include <stdexcept>

namespace blochnoise {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_sequence(const PulseSequence& seq) {
  if (seq.steps.empty()) throw std::invalid_argument("sequence: no steps");
  if (!(seq.f_r > 0)) throw std::invalid_argument("sequence: f_r must be > 0");
  for (const auto& s : seq.steps) {
    if (!(s.psi >= 0)) throw std::invalid_argument("sequence: psi must be >= 0");
    if (!(s.delay_before >= 0)) throw std::invalid_argument("sequence: delays must be >= 0");
  }
}

void check_unit(const BlochVector& j_i) {
  if (std::abs(j_i.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("sequence: initial vector must be unit norm");
  }
}

}  // namespace

const double bb1_phase = std::acos(-0.25);

double PulseSequence::total_angle() const {
  double acc = 0;
  for (const auto& s : steps) acc += std::abs(s.psi);
  return acc;
}

PulseSequence build_sequence(SequenceKind kind, double f_r) {
  PulseSequence seq;
  seq.f_r = f_r;
  switch (kind) {
    case SequenceKind::single_pi:
      seq.steps = {{0, kPi, 0}};
      break;
    case SequenceKind::corpse_pi:
      seq.steps = {{0, 7 * kPi / 3, 0}, {kPi, 5 * kPi / 3, 0}, {0, kPi / 3, 0}};
      break;
    case SequenceKind::scrofulous_pi:
      seq.steps = {{kPi / 3, kPi, 0}, {5 * kPi / 3, kPi, 0}, {kPi / 3, kPi, 0}};
      break;
    case SequenceKind::bb1_pi:
      seq.steps = {{bb1_phase, kPi, 0},
                   {3 * bb1_phase, 2 * kPi, 0},
                   {bb1_phase, kPi, 0},
                   {0, kPi, 0}};
      break;
    case SequenceKind::spin_echo:
      throw std::invalid_argument("build_sequence: use build_spin_echo for echo trains");
  }
  check_sequence(seq);
  return seq;
}

PulseSequence build_spin_echo(int n_pulses, double tau, EchoVariant variant,
                              double f_r) {
  if (n_pulses < 1) throw std::invalid_argument("build_spin_echo: need n_pulses >= 1");
  if (!(tau >= 0)) throw std::invalid_argument("build_spin_echo: tau must be >= 0");
  PulseSequence seq;
  seq.f_r = f_r;
  for (int k = 0; k < n_pulses; ++k) {
    const bool flip = variant == EchoVariant::alternating && k % 2 == 1;
    seq.steps.push_back({flip ? kPi : 0.0, kPi, k == 0 ? tau : 2 * tau});
  }
  check_sequence(seq);
  return seq;
}

PropagationResult propagate_noise(const BlochVector& j_i,
                                  const PulseSequence& seq, double l0) {
  check_sequence(seq);
  check_unit(j_i);
  if (!(l0 >= 0)) throw std::invalid_argument("propagate_noise: l0 must be >= 0");

  PropagationResult out;
  out.ideal.reserve(seq.steps.size());
  out.noise.reserve(seq.steps.size());
  BlochVector j = j_i;
  CovarianceMatrix w = CovarianceMatrix::Zero();
  for (const auto& step : seq.steps) {
    const RotationMatrix r = axis_xy_rotation(step.phi, step.psi);
    j = r * j;
    const CovarianceMatrix v =
        transform_covariance(l0 * neb_matrix(step.psi, seq.f_r), step.phi, j);
    w = r * w * r.transpose() + v;
    out.ideal.push_back(j);
    out.noise.push_back(w);
  }
  return out;
}

FidelityMetrics fidelity_metrics(const PropagationResult& result,
                                 const PulseSequence& seq, double l0) {
  if (result.noise.empty()) throw std::invalid_argument("fidelity_metrics: empty result");
  FidelityMetrics m;
  m.infidelity = result.final_noise().trace() / 4.0;
  m.average_infidelity = seq.total_angle() * kPi * seq.f_r * l0 / 3.0;
  return m;
}

BlochVector bloch_from_angles(double theta_i, double phi_i) {
  return {std::cos(theta_i) * std::cos(phi_i),
          std::cos(theta_i) * std::sin(phi_i), std::sin(theta_i)};
}

CovarianceMatrix closed_form_noise(SequenceKind kind, double theta_i,
                                   double phi_i, double f_r, double l0,
                                   int echo_n) {
  const double ct = std::cos(theta_i), st = std::sin(theta_i);
  const double cp = std::cos(phi_i), sp = std::sin(phi_i);
  const double s2t = std::sin(2 * theta_i), s2p = std::sin(2 * phi_i);
  CovarianceMatrix w = CovarianceMatrix::Zero();
  switch (kind) {
    case SequenceKind::single_pi: {
      const double s = kPi * kPi * f_r * l0;
      w(0, 0) = s * (1 - ct * ct * cp * cp);
      w(1, 1) = s * ct * ct * cp * cp;
      w(2, 2) = s * ct * ct * cp * cp;
      w(0, 1) = w(1, 0) = 0.5 * s * ct * ct * s2p;
      w(0, 2) = w(2, 0) = 0.5 * s * s2t * cp;
      break;
    }
    case SequenceKind::corpse_pi: {
      const double u = kPi * f_r * l0 / 3.0;
      const double lo = 13 * kPi - 3 * std::sqrt(3.0);
      const double hi = 13 * kPi + 3 * std::sqrt(3.0);
      w(0, 0) = u * (lo * ct * ct * sp * sp + hi * st * st);
      w(1, 1) = u * lo * ct * ct * cp * cp;
      w(2, 2) = u * hi * ct * ct * cp * cp;
      w(0, 1) = w(1, 0) = (kPi * f_r * l0 / 6.0) * lo * ct * ct * s2p;
      w(0, 2) = w(2, 0) = (kPi * f_r * l0 / 6.0) * hi * s2t * cp;
      break;
    }
    case SequenceKind::scrofulous_pi: {
      const double v = 1.5 * kPi * kPi * f_r * l0;
      w(0, 0) = v * (2 * ct * ct * sp * sp + st * st);
      w(1, 1) = v * (2 * ct * ct * cp * cp + st * st);
      w(2, 2) = v * ct * ct;
      w(0, 1) = w(1, 0) = v * ct * ct * s2p;
      w(1, 2) = w(2, 1) = -0.5 * v * s2t * sp;
      w(0, 2) = w(2, 0) = 0.5 * v * s2t * cp;
      break;
    }
    case SequenceKind::bb1_pi: {
      const double b = 1.25 * kPi * kPi * f_r * l0;
      w(0, 0) = b * (4 * ct * ct * sp * sp + st * st);
      w(1, 1) = b * (4 * ct * ct * cp * cp + 3 * st * st);
      w(2, 2) = b * ct * ct * (2 - std::cos(2 * phi_i));
      w(0, 1) = w(1, 0) = 2 * b * ct * ct * s2p;
      w(1, 2) = w(2, 1) = -1.5 * b * s2t * sp;
      w(0, 2) = w(2, 0) = 0.5 * b * s2t * cp;
      break;
    }
    case SequenceKind::spin_echo:
      return spin_echo_noise(echo_n, bloch_from_angles(theta_i, phi_i), f_r, l0);
  }
  return w;
}

double closed_form_infidelity(SequenceKind kind, double theta_i, double phi_i,
                              double f_r, double l0, int echo_n) {
  return closed_form_noise(kind, theta_i, phi_i, f_r, l0, echo_n).trace() / 4.0;
}

CovarianceMatrix spin_echo_noise(int n_pulses, const BlochVector& j_i,
                                 double f_r, double l0) {
  if (n_pulses < 1) throw std::invalid_argument("spin_echo_noise: need n_pulses >= 1");
  check_unit(j_i);
  const double jx = j_i.x(), jy = j_i.y(), jz = j_i.z();
  const double s_n = (n_pulses % 2 == 1) ? 1.0 : -1.0;
  const double a = n_pulses * kPi * kPi * f_r * l0;
  CovarianceMatrix w;
  w << a * (1 - jx * jx), a * s_n * jx * jy, a * s_n * jx * jz,
      a * s_n * jx * jy, a * jx * jx, 0,
      a * s_n * jx * jz, 0, a * jx * jx;
  return w;
}

}  // namespace blochnoise
