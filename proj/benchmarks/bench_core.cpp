#include <benchmark/benchmark.h>

#include <cmath>

#include "blochnoise/covariance.hpp"
#include "blochnoise/montecarlo.hpp"
#include "blochnoise/sequences.hpp"
#include "blochnoise/spectra.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

void BM_TransferTilde(benchmark::State& state) {
  double x = 0.3;
  for (auto _ : state) {
    auto t = blochnoise::transfer_tilde(4.0 * kPi, x);
    benchmark::DoNotOptimize(t);
    x += 1e-6;
  }
}
BENCHMARK(BM_TransferTilde);

void BM_TransferTildeResonanceWindow(benchmark::State& state) {
  for (auto _ : state) {
    auto t = blochnoise::transfer_tilde(4.0 * kPi, 1.0 + 5e-5);
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(BM_TransferTildeResonanceWindow);

void BM_NoiseQuadraturePowerLaw(benchmark::State& state) {
  const auto spec = blochnoise::PhaseNoiseSpectrum::power_law({{2, 1e-2}});
  blochnoise::NoiseIntegralOptions opts;
  opts.f_low = 1e2;
  for (auto _ : state) {
    auto r = blochnoise::noise_matrix_tilde(spec, kPi, 4.04e4, opts);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_NoiseQuadraturePowerLaw);

void BM_PropagateCorpse(benchmark::State& state) {
  const auto seq =
      blochnoise::build_sequence(blochnoise::SequenceKind::corpse_pi, 4.04e4);
  const auto j_i = blochnoise::bloch_from_angles(0.7, 1.1);
  for (auto _ : state) {
    auto r = blochnoise::propagate_noise(j_i, seq, 1e-12);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_PropagateCorpse);

void BM_ClosedFormGrid(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double th = 0.5 * kPi * i / (n - 1);
        const double ph = kPi * j / (n - 1);
        acc += blochnoise::closed_form_noise(blochnoise::SequenceKind::bb1_pi,
                                             th, ph, 1.0, 1.0)
                   .trace();
      }
    }
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_ClosedFormGrid)->Arg(19)->Arg(101);

void BM_McTonePulse(benchmark::State& state) {
  blochnoise::McConfig cfg;
  cfg.n_samples = state.range(0);
  cfg.steps_per_rabi_cycle = 64;
  cfg.seed = 12345;
  cfg.sigma_beta = 1e-3;
  for (auto _ : state) {
    auto r = blochnoise::mc_tone_transfer(kPi, 1.125, cfg);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * cfg.n_samples);
}
BENCHMARK(BM_McTonePulse)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_McWhitePulse(benchmark::State& state) {
  const auto seq =
      blochnoise::build_sequence(blochnoise::SequenceKind::single_pi, 1.0);
  const blochnoise::BlochVector j_i(0, 0, 1);
  blochnoise::McConfig cfg;
  cfg.n_samples = state.range(0);
  cfg.steps_per_rabi_cycle = 64;
  cfg.seed = 12345;
  for (auto _ : state) {
    auto r = blochnoise::mc_white_noise(seq, j_i, 1e-6, cfg);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * cfg.n_samples);
}
BENCHMARK(BM_McWhitePulse)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
