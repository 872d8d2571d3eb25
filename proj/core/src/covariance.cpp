#include "blochnoise/covariance.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "blochnoise/deflection.hpp"

namespace blochnoise {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sgn(double v) { return (v > 0) - (v < 0); }

// int_a^b x^e dx with b possibly infinite (requires e < -1 then).
double power_integral(double e, double a, double b) {
  if (std::isinf(b)) {
    if (!(e < -1.0)) throw std::domain_error("noise integral: high-frequency tail diverges");
    return -std::pow(a, e + 1.0) / (e + 1.0);
  }
  if (std::abs(e + 1.0) < 1e-12) return std::log(b / a);
  return (std::pow(b, e + 1.0) - std::pow(a, e + 1.0)) / (e + 1.0);
}

// f_r * int_{a}^{b} L(x f_r) x^{-2} dx, analytic per spectrum component.
// b may be infinite for spectra defined out to arbitrary frequency.
double tail_weight(const PhaseNoiseSpectrum& spec, double f_r, double a, double b,
                   bool extrapolate_tabulated) {
  if (b <= a) return 0;
  if (const auto* w = std::get_if<WhiteNoise>(&spec.model())) {
    return f_r * w->l0 * power_integral(-2.0, a, b);
  }
  if (const auto* p = std::get_if<PowerLawNoise>(&spec.model())) {
    double acc = 0;
    for (const auto& t : p->terms) {
      if (t.l_k == 0) continue;
      acc += t.l_k * std::pow(f_r, -t.k) * power_integral(-2.0 - t.k, a, b);
    }
    return f_r * acc;
  }
  const auto& pts = std::get<TabulatedNoise>(spec.model()).points;
  double acc = 0;
  if (extrapolate_tabulated) {
    const double lo_edge = pts.front().f / f_r;
    if (a < lo_edge) {
      acc += pts.front().l * power_integral(-2.0, a, std::min(b, lo_edge));
    }
    const double hi_edge = pts.back().f / f_r;
    if (b > hi_edge) {
      acc += pts.back().l * power_integral(-2.0, std::max(a, hi_edge), b);
    }
  }
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double x1 = pts[i].f / f_r, x2 = pts[i + 1].f / f_r;
    const double lo = std::max(a, x1), hi = std::min(b, x2);
    if (hi <= lo) continue;
    const double slope = std::log(pts[i + 1].l / pts[i].l) / std::log(x2 / x1);
    acc += pts[i].l * std::pow(x1, -slope) * power_integral(slope - 2.0, lo, hi);
  }
  return f_r * acc;
}

CovarianceMatrix entrywise_tail(double psi, double weight) {
  const double s = std::sin(psi), c = std::cos(psi);
  CovarianceMatrix m = CovarianceMatrix::Zero();
  m(1, 1) = 2.0 * s * s * weight;
  m(2, 2) = 2.0 * (1.0 + c * c) * weight;
  m(1, 2) = m(2, 1) = -2.0 * s * c * weight;
  return m;
}

}  // namespace

CovarianceMatrix transfer_tilde(double psi, double x) {
  const DeflectionBasis b = deflection_basis(psi, x);
  CovarianceMatrix t = CovarianceMatrix::Zero();
  t(1, 1) = 2.0 * (b.ay * b.ay + b.by * b.by);
  t(2, 2) = 2.0 * (b.az * b.az + b.bz * b.bz);
  t(1, 2) = t(2, 1) = 2.0 * (b.ay * b.az + b.by * b.bz);
  return t;
}

CovarianceMatrix transform_covariance(const CovarianceMatrix& v_tilde,
                                      double phi_r, const BlochVector& j_final) {
  const Eigen::Matrix3d g = geometry_transform(phi_r, j_final);
  return g * v_tilde * g.transpose();
}

CovarianceMatrix neb_matrix(double psi, double f_r) {
  const double s2 = std::sin(2.0 * psi), ss = std::sin(psi) * std::sin(psi);
  CovarianceMatrix m = CovarianceMatrix::Zero();
  const double w = kPi * f_r * sgn(psi);
  m(1, 1) = w * (psi - 0.5 * s2);
  m(2, 2) = w * (psi + 0.5 * s2);
  m(1, 2) = m(2, 1) = -w * ss;
  return m;
}

NoiseIntegral noise_matrix_quadrature(const PhaseNoiseSpectrum& spec, double psi,
                                      double f_r,
                                      const NoiseIntegralOptions& opts) {
  if (!(f_r > 0)) throw std::invalid_argument("noise_matrix_quadrature: f_r must be > 0");
  if (!(opts.x_max > 0)) throw std::invalid_argument("noise_matrix_quadrature: x_max must be > 0");
  if (spec.is_tones()) {
    throw std::invalid_argument("noise_matrix_quadrature: tone spectra have no density; use noise_matrix_tilde");
  }

  NoiseIntegral out;
  double x_lo = opts.f_low / f_r;
  double x_hi = opts.x_max;
  double tail_hi = std::numeric_limits<double>::infinity();

  std::function<double(double)> density;
  if (const auto* w = std::get_if<WhiteNoise>(&spec.model())) {
    const double l0 = w->l0;
    density = [l0](double) { return l0; };
  } else if (const auto* p = std::get_if<PowerLawNoise>(&spec.model())) {
    for (const auto& t : p->terms) {
      if (t.l_k > 0 && t.k >= 1 && !(opts.f_low > 0)) {
        throw std::domain_error(
            "noise_matrix_quadrature: power-law term with k >= 1 diverges at "
            "f = 0; set options.f_low to a positive cutoff");
      }
    }
    const auto terms = p->terms;
    density = [terms, f_r](double x) {
      double acc = 0;
      for (const auto& t : terms) acc += t.l_k * std::pow(x * f_r, -t.k);
      return acc;
    };
  } else {
    const auto& pts = std::get<TabulatedNoise>(spec.model()).points;
    const double support_lo = pts.front().f / f_r;
    const double support_hi = pts.back().f / f_r;
    if (opts.extrapolate_tabulated) {
      // The tail always extends past the last knot, so flat extension is
      // in use whenever extrapolation is enabled.
      out.extrapolated = true;
    } else {
      x_lo = std::max(x_lo, support_lo);
      x_hi = std::min(x_hi, support_hi);
      tail_hi = support_hi;
    }
    const PhaseNoiseSpectrum* sp = &spec;
    density = [sp, f_r](double x) { return ssb_value(*sp, x * f_r); };
  }

  // Block edges: geometric refinement toward a small lower bound, then linear
  // blocks no wider than a quarter modulation period in x.
  std::vector<double> edges;
  if (x_hi > x_lo) {
    edges.push_back(x_lo);
    const double log_top = std::min(0.25, x_hi);
    if (x_lo > 0 && x_lo < log_top) {
      for (double x = x_lo; x < log_top; x *= 2) {
        edges.push_back(std::min(2 * x, log_top));
      }
    }
    const double w = std::min(0.25, 0.5 * kPi / std::max(std::abs(psi), 1.0));
    while (edges.back() < x_hi) {
      edges.push_back(std::min(edges.back() + w, x_hi));
    }
  }

  using quad = boost::math::quadrature::gauss_kronrod<double, 15>;
  const int entries[3][2] = {{1, 1}, {2, 2}, {1, 2}};
  for (const auto& e : entries) {
    const int r = e[0], c = e[1];
    auto f = [&](double x) { return f_r * density(x) * transfer_tilde(psi, x)(r, c); };
    double acc = 0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      acc += quad::integrate(f, edges[i], edges[i + 1], 10, 1e-10);
    }
    out.matrix(r, c) = acc;
  }
  out.matrix(2, 1) = out.matrix(1, 2);

  out.tail = entrywise_tail(
      psi, tail_weight(spec, f_r, opts.x_max, tail_hi, opts.extrapolate_tabulated));
  out.matrix += out.tail;
  return out;
}

NoiseIntegral noise_matrix_tilde(const PhaseNoiseSpectrum& spec, double psi,
                                 double f_r, const NoiseIntegralOptions& opts) {
  if (!(f_r > 0)) throw std::invalid_argument("noise_matrix_tilde: f_r must be > 0");
  if (const auto* w = std::get_if<WhiteNoise>(&spec.model())) {
    NoiseIntegral out;
    out.matrix = w->l0 * neb_matrix(psi, f_r);
    return out;
  }
  if (const auto* t = std::get_if<ToneNoise>(&spec.model())) {
    NoiseIntegral out;
    for (const auto& tone : t->tones) {
      out.matrix += 0.25 * tone.beta_sq * transfer_tilde(psi, tone.f0 / f_r);
    }
    return out;
  }
  return noise_matrix_quadrature(spec, psi, f_r, opts);
}

LargePsiResult noise_matrix_large_psi(const PhaseNoiseSpectrum& spec,
                                      double psi, double f_r) {
  if (!(f_r > 0)) throw std::invalid_argument("noise_matrix_large_psi: f_r must be > 0");
  LargePsiResult out;
  if (spec.is_tones()) {
    const auto& tones = std::get<ToneNoise>(spec.model()).tones;
    for (const auto& tone : tones) {
      if (std::abs(tone.f0 - f_r) <= 1e-9 * f_r) {
        throw std::domain_error(
            "noise_matrix_large_psi: tone at f_r has no finite density");
      }
    }
    out.no_density_warning = true;
    return out;
  }
  const double w = kPi * f_r * std::abs(psi) * ssb_value(spec, f_r);
  out.matrix(1, 1) = w;
  out.matrix(2, 2) = w;
  return out;
}

double project_variance(const CovarianceMatrix& v, const BlochVector& n) {
  if (std::abs(n.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("project_variance: direction must be unit norm");
  }
  return n.dot(v * n);
}

}  // namespace blochnoise
