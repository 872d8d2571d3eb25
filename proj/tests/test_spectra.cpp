#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "blochnoise/spectra.hpp"

using blochnoise::dbc_to_linear;
using blochnoise::detuning_tone_to_phase_tone;
using blochnoise::integrated_phase_variance;
using blochnoise::linear_to_dbc;
using blochnoise::load_datasheet_csv;
using blochnoise::PhaseNoiseSpectrum;
using blochnoise::PowerLawTerm;
using blochnoise::ssb_value;
using blochnoise::TabulatedPoint;
using blochnoise::Tone;

TEST_CASE("dbc conversions") {
  CHECK(dbc_to_linear(-100.0) == doctest::Approx(1e-10).epsilon(1e-12));
  CHECK(dbc_to_linear(0.0) == 1.0);
  CHECK(dbc_to_linear(linear_to_dbc(3.7e-13)) ==
        doctest::Approx(3.7e-13).epsilon(1e-12));
  CHECK_THROWS_AS(linear_to_dbc(0.0), std::domain_error);
  CHECK_THROWS_AS(linear_to_dbc(-1e-10), std::domain_error);
}

TEST_CASE("ssb_value per spectrum family") {
  CHECK(ssb_value(PhaseNoiseSpectrum::white(1e-11), 1e3) == 1e-11);

  const auto power = PhaseNoiseSpectrum::power_law({{2, 1e-4}});
  CHECK(ssb_value(power, 100.0) == doctest::Approx(1e-8).epsilon(1e-12));

  const auto tab =
      PhaseNoiseSpectrum::tabulated({{1e3, 1e-10}, {1e5, 1e-12}});
  CHECK(ssb_value(tab, 1e4) == doctest::Approx(1e-11).epsilon(1e-12));

  CHECK_THROWS_AS(ssb_value(PhaseNoiseSpectrum::tones({{1e3, 1e-6}}), 1e3),
                  std::domain_error);
}

TEST_CASE("tabulated interpolation is exact at knots and flags extrapolation") {
  const auto tab = PhaseNoiseSpectrum::tabulated(
      {{1e2, 3e-9}, {1e3, 1e-10}, {1e5, 1e-12}});
  CHECK(ssb_value(tab, 1e2) == 3e-9);
  CHECK(ssb_value(tab, 1e3) == 1e-10);
  CHECK(ssb_value(tab, 1e5) == 1e-12);

  bool flag = false;
  CHECK(ssb_value(tab, 10.0, &flag) == 3e-9);
  CHECK(flag);
  flag = false;
  CHECK(ssb_value(tab, 1e6, &flag) == 1e-12);
  CHECK(flag);
  flag = true;
  ssb_value(tab, 1e4, &flag);
  CHECK_FALSE(flag);
}

TEST_CASE("spectrum validation") {
  CHECK_THROWS_AS(PhaseNoiseSpectrum::white(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(PhaseNoiseSpectrum::tones({{-5.0, 1e-6}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(PhaseNoiseSpectrum::tabulated({{1e3, 1e-10}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      PhaseNoiseSpectrum::tabulated({{1e3, 1e-10}, {1e3, 1e-11}}),
      std::invalid_argument);
  CHECK_THROWS_AS(PhaseNoiseSpectrum::tabulated({{1e3, 1e-10}, {1e4, 0.0}}),
                  std::invalid_argument);
}

TEST_CASE("integrated variance closed forms") {
  CHECK(integrated_phase_variance(PhaseNoiseSpectrum::white(2.5e-12), 1e2, 1e4) ==
        doctest::Approx(2 * 2.5e-12 * (1e4 - 1e2)).epsilon(1e-12));

  // Tone inside the band carries half its mean square phase excursion.
  const auto tones = PhaseNoiseSpectrum::tones({{1e3, 4e-6}});
  CHECK(integrated_phase_variance(tones, 1e2, 1e4) ==
        doctest::Approx(2e-6).epsilon(1e-12));
  CHECK(integrated_phase_variance(tones, 2e3, 1e4) == 0.0);

  // 1/f^2 analytic antiderivative.
  const auto power = PhaseNoiseSpectrum::power_law({{2, 1e-4}});
  CHECK(integrated_phase_variance(power, 10.0, 1e3) ==
        doctest::Approx(2e-4 * (0.1 - 1e-3)).epsilon(1e-12));

  // 1/f term integrates to a logarithm.
  const auto flicker = PhaseNoiseSpectrum::power_law({{1, 2e-9}});
  CHECK(integrated_phase_variance(flicker, 1e2, 1e4) ==
        doctest::Approx(2 * 2e-9 * std::log(100.0)).epsilon(1e-12));
}

TEST_CASE("integrated variance is additive over adjacent bands") {
  const auto spec = PhaseNoiseSpectrum::power_law({{0, 1e-13}, {2, 3e-6}});
  const double whole = integrated_phase_variance(spec, 50.0, 5e4);
  const double split = integrated_phase_variance(spec, 50.0, 700.0) +
                       integrated_phase_variance(spec, 700.0, 5e4);
  CHECK(whole == doctest::Approx(split).epsilon(1e-10));
}

TEST_CASE("integrated variance of tabulated spectra") {
  // Exact power-law segment: L = 1e-4 / f^2 through both knots, so the
  // segment integral must match the analytic antiderivative.
  const auto tab = PhaseNoiseSpectrum::tabulated({{1e2, 1e-8}, {1e4, 1e-12}});
  CHECK(integrated_phase_variance(tab, 1e2, 1e4) ==
        doctest::Approx(2e-4 * (1e-2 - 1e-4)).epsilon(1e-10));

  // Band clipped to the knot support by default; flat wings when the caller
  // asks for extrapolation.
  CHECK(integrated_phase_variance(tab, 10.0, 1e4) ==
        doctest::Approx(2e-4 * (1e-2 - 1e-4)).epsilon(1e-10));
  bool flag = false;
  const double extended = integrated_phase_variance(tab, 10.0, 1e4, &flag);
  CHECK(flag);
  CHECK(extended == doctest::Approx(2e-4 * (1e-2 - 1e-4) + 2 * 1e-8 * 90.0)
                        .epsilon(1e-10));
}

TEST_CASE("integrated variance rejects invalid bands") {
  const auto w = PhaseNoiseSpectrum::white(1e-12);
  CHECK_THROWS_AS(integrated_phase_variance(w, 0.0, 1e3), std::invalid_argument);
  CHECK_THROWS_AS(integrated_phase_variance(w, 1e3, 1e2), std::invalid_argument);
  const auto flicker = PhaseNoiseSpectrum::power_law({{1, 1e-9}});
  CHECK_THROWS_AS(integrated_phase_variance(flicker, 1e2, 1e1),
                  std::invalid_argument);
}

TEST_CASE("detuning tone mapping") {
  const Tone t = detuning_tone_to_phase_tone(1e3, 1.0);
  CHECK(t.f0 == 1e3);
  CHECK(t.beta_sq == doctest::Approx(1e-6).epsilon(1e-12));
  CHECK(detuning_tone_to_phase_tone(40e3, 0.0).beta_sq == 0.0);
  CHECK(detuning_tone_to_phase_tone(1e3, 4.0).beta_sq ==
        doctest::Approx(4e-6).epsilon(1e-12));
  CHECK_THROWS_AS(detuning_tone_to_phase_tone(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("datasheet parsing") {
  std::istringstream in(
      "# vendor datasheet, SSB phase noise\n"
      "f_hz,l_dbc_hz\n"
      "1e2,-90\n"
      "# mid-band comment\n"
      "1e4,-110\n"
      "1e6,-130\n");
  const PhaseNoiseSpectrum spec = load_datasheet_csv(in);
  CHECK(ssb_value(spec, 1e2) == doctest::Approx(1e-9).epsilon(1e-12));
  CHECK(ssb_value(spec, 1e4) == doctest::Approx(1e-11).epsilon(1e-12));
  CHECK(ssb_value(spec, 1e6) == doctest::Approx(1e-13).epsilon(1e-12));
  CHECK(ssb_value(spec, 1e3) == doctest::Approx(1e-10).epsilon(1e-9));
}

TEST_CASE("datasheet parsing rejects malformed input") {
  std::istringstream no_header("1e2,-90\n");
  CHECK_THROWS_AS(load_datasheet_csv(no_header), std::runtime_error);

  std::istringstream bad_row("f_hz,l_dbc_hz\n1e2\n");
  CHECK_THROWS_AS(load_datasheet_csv(bad_row), std::runtime_error);

  std::istringstream not_numeric("f_hz,l_dbc_hz\nabc,-90\n");
  CHECK_THROWS_AS(load_datasheet_csv(not_numeric), std::runtime_error);

  std::istringstream empty("# only comments\n");
  CHECK_THROWS_AS(load_datasheet_csv(empty), std::runtime_error);
}
