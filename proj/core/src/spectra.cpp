#include "blochnoise/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace blochnoise {

namespace {

void validate(const PhaseNoiseSpectrum::Model& m) {
  if (const auto* w = std::get_if<WhiteNoise>(&m)) {
    if (!(w->l0 >= 0)) throw std::invalid_argument("white noise: l0 must be >= 0");
  } else if (const auto* p = std::get_if<PowerLawNoise>(&m)) {
    for (const auto& t : p->terms) {
      if (!(t.l_k >= 0)) throw std::invalid_argument("power law: l_k must be >= 0");
    }
  } else if (const auto* t = std::get_if<ToneNoise>(&m)) {
    for (const auto& tone : t->tones) {
      if (!(tone.f0 > 0)) throw std::invalid_argument("tone: f0 must be > 0");
      if (!(tone.beta_sq >= 0)) throw std::invalid_argument("tone: beta_sq must be >= 0");
    }
  } else if (const auto* tab = std::get_if<TabulatedNoise>(&m)) {
    if (tab->points.size() < 2) {
      throw std::invalid_argument("tabulated: need at least two points");
    }
    double prev_f = 0;
    for (const auto& pt : tab->points) {
      if (!(pt.f > prev_f)) {
        throw std::invalid_argument("tabulated: frequencies must be positive and strictly increasing");
      }
      if (!(pt.l > 0)) {
        throw std::invalid_argument("tabulated: densities must be > 0 for log-log interpolation");
      }
      prev_f = pt.f;
    }
  }
}

// Integral of the log-log interpolant l1*(f/f1)^b over [a, b_hi] within a
// segment [f1, f2], where b = log(l2/l1)/log(f2/f1).
double segment_integral(double f1, double l1, double f2, double l2, double a,
                        double b_hi) {
  if (b_hi <= a) return 0;
  const double slope = std::log(l2 / l1) / std::log(f2 / f1);
  if (std::abs(slope + 1.0) < 1e-12) {
    return l1 * f1 * std::log(b_hi / a);
  }
  const double e = slope + 1.0;
  return l1 / std::pow(f1, slope) / e * (std::pow(b_hi, e) - std::pow(a, e));
}

double power_law_band(const PowerLawNoise& p, double f_l, double f_h) {
  double acc = 0;
  for (const auto& t : p.terms) {
    if (t.l_k == 0) continue;
    if (t.k == 1) {
      if (!(f_l > 0)) {
        throw std::domain_error("integrated_phase_variance: 1/f term diverges at f = 0; use a positive lower bound");
      }
      acc += t.l_k * std::log(f_h / f_l);
    } else if (t.k > 1) {
      if (!(f_l > 0)) {
        throw std::domain_error("integrated_phase_variance: 1/f^k term diverges at f = 0; use a positive lower bound");
      }
      const double e = 1.0 - t.k;
      acc += t.l_k / e * (std::pow(f_h, e) - std::pow(f_l, e));
    } else {
      const double e = 1.0 - t.k;  // k <= 0: polynomial in f
      acc += t.l_k / e * (std::pow(f_h, e) - std::pow(f_l, e));
    }
  }
  return acc;
}

}  // namespace

PhaseNoiseSpectrum::PhaseNoiseSpectrum(Model m) : model_(std::move(m)) {
  validate(model_);
}

PhaseNoiseSpectrum PhaseNoiseSpectrum::white(double l0) {
  return PhaseNoiseSpectrum(Model{WhiteNoise{l0}});
}

PhaseNoiseSpectrum PhaseNoiseSpectrum::power_law(std::vector<PowerLawTerm> terms) {
  return PhaseNoiseSpectrum(Model{PowerLawNoise{std::move(terms)}});
}

PhaseNoiseSpectrum PhaseNoiseSpectrum::tones(std::vector<Tone> tones) {
  return PhaseNoiseSpectrum(Model{ToneNoise{std::move(tones)}});
}

PhaseNoiseSpectrum PhaseNoiseSpectrum::tabulated(std::vector<TabulatedPoint> points) {
  return PhaseNoiseSpectrum(Model{TabulatedNoise{std::move(points)}});
}

double dbc_to_linear(double l_dbc) { return std::pow(10.0, l_dbc / 10.0); }

double linear_to_dbc(double l) {
  if (!(l > 0)) throw std::domain_error("linear_to_dbc: density must be > 0");
  return 10.0 * std::log10(l);
}

double ssb_value(const PhaseNoiseSpectrum& spec, double f_m, bool* extrapolated) {
  if (!(f_m > 0)) throw std::domain_error("ssb_value: f_m must be > 0");
  if (extrapolated) *extrapolated = false;
  if (const auto* w = std::get_if<WhiteNoise>(&spec.model())) {
    return w->l0;
  }
  if (const auto* p = std::get_if<PowerLawNoise>(&spec.model())) {
    double acc = 0;
    for (const auto& t : p->terms) acc += t.l_k * std::pow(f_m, -t.k);
    return acc;
  }
  if (std::holds_alternative<ToneNoise>(spec.model())) {
    throw std::domain_error("ssb_value: a discrete tone spectrum has no pointwise density");
  }
  const auto& pts = std::get<TabulatedNoise>(spec.model()).points;
  if (f_m <= pts.front().f) {
    if (extrapolated && f_m < pts.front().f) *extrapolated = true;
    return pts.front().l;
  }
  if (f_m >= pts.back().f) {
    if (extrapolated && f_m > pts.back().f) *extrapolated = true;
    return pts.back().l;
  }
  auto hi = std::upper_bound(pts.begin(), pts.end(), f_m,
                             [](double v, const TabulatedPoint& p) { return v < p.f; });
  const auto& p2 = *hi;
  const auto& p1 = *std::prev(hi);
  const double slope = std::log(p2.l / p1.l) / std::log(p2.f / p1.f);
  return p1.l * std::pow(f_m / p1.f, slope);
}

double integrated_phase_variance(const PhaseNoiseSpectrum& spec, double f_l,
                                 double f_h, bool* extrapolated) {
  if (!(f_l > 0) || !(f_h > f_l)) {
    throw std::invalid_argument("integrated_phase_variance: need 0 < f_l < f_h");
  }
  if (extrapolated) *extrapolated = false;
  if (const auto* w = std::get_if<WhiteNoise>(&spec.model())) {
    return 2.0 * w->l0 * (f_h - f_l);
  }
  if (const auto* p = std::get_if<PowerLawNoise>(&spec.model())) {
    return 2.0 * power_law_band(*p, f_l, f_h);
  }
  if (const auto* t = std::get_if<ToneNoise>(&spec.model())) {
    double acc = 0;
    for (const auto& tone : t->tones) {
      if (tone.f0 >= f_l && tone.f0 <= f_h) acc += tone.beta_sq / 2.0;
    }
    return acc;
  }
  const auto& pts = std::get<TabulatedNoise>(spec.model()).points;
  double lo = f_l, hi = f_h;
  const bool clipped = lo < pts.front().f || hi > pts.back().f;
  if (clipped && !extrapolated) {
    lo = std::max(lo, pts.front().f);
    hi = std::min(hi, pts.back().f);
    if (hi <= lo) return 0;
  } else if (clipped) {
    *extrapolated = true;
  }
  double acc = 0;
  if (extrapolated) {
    // Flat wings at the endpoint densities.
    if (lo < pts.front().f) {
      acc += pts.front().l * (std::min(hi, pts.front().f) - lo);
    }
    if (hi > pts.back().f) {
      acc += pts.back().l * (hi - std::max(lo, pts.back().f));
    }
  }
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = std::max(lo, pts[i].f);
    const double b = std::min(hi, pts[i + 1].f);
    if (b > a) {
      acc += segment_integral(pts[i].f, pts[i].l, pts[i + 1].f, pts[i + 1].l, a, b);
    }
  }
  return 2.0 * acc;
}

Tone detuning_tone_to_phase_tone(double f0, double delta_f_sq) {
  if (!(f0 > 0)) throw std::invalid_argument("detuning_tone_to_phase_tone: f0 must be > 0");
  if (!(delta_f_sq >= 0)) throw std::invalid_argument("detuning_tone_to_phase_tone: delta_f_sq must be >= 0");
  return Tone{f0, delta_f_sq / (f0 * f0)};
}

PhaseNoiseSpectrum load_datasheet_csv(std::istream& in) {
  std::vector<TabulatedPoint> points;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    if (!header_seen) {
      if (line.find("f_hz") == std::string::npos ||
          line.find("l_dbc_hz") == std::string::npos) {
        throw std::runtime_error("datasheet: expected header `f_hz,l_dbc_hz`");
      }
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    std::string f_str, l_str;
    if (!std::getline(row, f_str, ',') || !std::getline(row, l_str)) {
      throw std::runtime_error("datasheet: malformed row at line " + std::to_string(line_no));
    }
    try {
      points.push_back({std::stod(f_str), dbc_to_linear(std::stod(l_str))});
    } catch (const std::exception&) {
      throw std::runtime_error("datasheet: non-numeric row at line " + std::to_string(line_no));
    }
  }
  if (!header_seen) throw std::runtime_error("datasheet: missing header row");
  return PhaseNoiseSpectrum::tabulated(std::move(points));
}

}  // namespace blochnoise
