#pragma once

#include <iosfwd>
#include <variant>
#include <vector>

namespace blochnoise {

// Single-sideband phase noise density L(f_m), rad^2/Hz, one-sided in the
// offset frequency f_m > 0.

struct WhiteNoise {
  double l0 = 0;  // rad^2/Hz
};

struct PowerLawTerm {
  int k = 0;     // exponent: contribution l_k / f_m^k
  double l_k = 0;
};

struct PowerLawNoise {
  std::vector<PowerLawTerm> terms;
};

// Discrete tone at f0 with mean squared phase excursion beta_sq = <beta^2>;
// contributes (beta_sq / 4) * delta(f_m - f0) to L.
struct Tone {
  double f0 = 0;       // Hz
  double beta_sq = 0;  // rad^2
};

struct ToneNoise {
  std::vector<Tone> tones;
};

struct TabulatedPoint {
  double f = 0;  // Hz
  double l = 0;  // rad^2/Hz, > 0 (log-log interpolation)
};

struct TabulatedNoise {
  std::vector<TabulatedPoint> points;  // strictly increasing in f
};

class PhaseNoiseSpectrum {
 public:
  using Model = std::variant<WhiteNoise, PowerLawNoise, ToneNoise, TabulatedNoise>;

  PhaseNoiseSpectrum() : model_(WhiteNoise{}) {}
  explicit PhaseNoiseSpectrum(Model m);

  static PhaseNoiseSpectrum white(double l0);
  static PhaseNoiseSpectrum power_law(std::vector<PowerLawTerm> terms);
  static PhaseNoiseSpectrum tones(std::vector<Tone> tones);
  static PhaseNoiseSpectrum tabulated(std::vector<TabulatedPoint> points);

  const Model& model() const { return model_; }

  bool is_white() const { return std::holds_alternative<WhiteNoise>(model_); }
  bool is_tones() const { return std::holds_alternative<ToneNoise>(model_); }

 private:
  Model model_;
};

// dBc/Hz <-> rad^2/Hz (numerically equal to 1/Hz on the linear side).
double dbc_to_linear(double l_dbc);
double linear_to_dbc(double l);

// Pointwise density at f_m > 0.  Tone spectra have no pointwise density and
// throw.  Tabulated queries outside the knot range return the nearest
// endpoint value (flat extrapolation) and set *extrapolated when given.
double ssb_value(const PhaseNoiseSpectrum& spec, double f_m,
                 bool* extrapolated = nullptr);

// Integrated phase variance <dphi^2> = 2 * int_{f_l}^{f_h} L(f) df, evaluated
// analytically per component.  Tones contribute beta_sq / 2 each when f0 lies
// in [f_l, f_h].  Tabulated segments integrate their log-log interpolant; the
// band is clipped to the knot support unless flat extrapolation is accepted
// by passing `extrapolated` (which is then set if clipping occurred).
double integrated_phase_variance(const PhaseNoiseSpectrum& spec, double f_l,
                                 double f_h, bool* extrapolated = nullptr);

// A sinusoidal frequency excursion of mean square <delta_f^2> (Hz^2) at rate
// f0 integrates to a phase tone with <beta^2> = <delta_f^2> / f0^2.
Tone detuning_tone_to_phase_tone(double f0, double delta_f_sq);

// Datasheet rows `f_hz,l_dbc_hz`; `#` starts a comment line; a header row
// naming the two columns is required.  Returns a tabulated spectrum.
PhaseNoiseSpectrum load_datasheet_csv(std::istream& in);

}  // namespace blochnoise
