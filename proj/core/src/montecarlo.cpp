#include "blochnoise/montecarlo.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace blochnoise {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr long long kChunk = 256;  // samples per work unit; fixed so the
                                   // reduction shape is worker-independent

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::mt19937_64 sample_engine(std::uint64_t seed, long long index) {
  return std::mt19937_64(
      splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index))));
}

void check_config(const McConfig& cfg) {
  if (cfg.n_samples < 100) throw std::invalid_argument("mc: n_samples must be >= 100");
  if (cfg.steps_per_rabi_cycle < 16) {
    throw std::invalid_argument("mc: steps_per_rabi_cycle must be >= 16");
  }
  if (!(cfg.sigma_beta >= 0)) throw std::invalid_argument("mc: sigma_beta must be >= 0");
}

// Rotation of j through the fixed step angle (c = cos, s = sin) about the
// in-plane axis at angle a.
inline void rotate_step(BlochVector& j, double a, double c, double s) {
  const double ca = std::cos(a), sa = std::sin(a);
  const double nd = ca * j.x() + sa * j.y();
  const double v = 1.0 - c;
  const double jx = c * j.x() + s * sa * j.z() + v * nd * ca;
  const double jy = c * j.y() - s * ca * j.z() + v * nd * sa;
  const double jz = c * j.z() + s * (ca * j.y() - sa * j.x());
  j = BlochVector(jx, jy, jz);
}

// Unique entries of a symmetric 3x3, row-major upper triangle.
using Entries = std::array<double, 6>;

Entries outer_entries(const BlochVector& j) {
  return {j.x() * j.x(), j.x() * j.y(), j.x() * j.z(),
          j.y() * j.y(), j.y() * j.z(), j.z() * j.z()};
}

struct Partial {
  Entries sum{};
  Entries sum_sq{};
};

Partial reduce_pairwise(const std::vector<Partial>& parts, std::size_t lo,
                        std::size_t hi) {
  if (hi - lo == 1) return parts[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  Partial a = reduce_pairwise(parts, lo, mid);
  const Partial b = reduce_pairwise(parts, mid, hi);
  for (int i = 0; i < 6; ++i) {
    a.sum[i] += b.sum[i];
    a.sum_sq[i] += b.sum_sq[i];
  }
  return a;
}

// Runs per_item over [0, n_items) in fixed chunks; chunk partials are
// combined by an index-ordered pairwise tree, so the result is independent
// of the worker count.
McEstimate run_estimator(long long n_items, int workers,
                         const std::function<Entries(long long)>& per_item) {
  const std::size_t n_chunks =
      static_cast<std::size_t>((n_items + kChunk - 1) / kChunk);
  std::vector<Partial> partials(n_chunks);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) {
      Partial p;
      const long long lo = static_cast<long long>(c) * kChunk;
      const long long hi = std::min(n_items, lo + kChunk);
      for (long long i = lo; i < hi; ++i) {
        const Entries v = per_item(i);
        for (int e = 0; e < 6; ++e) {
          p.sum[e] += v[e];
          p.sum_sq[e] += v[e] * v[e];
        }
      }
      partials[c] = p;
    }
  };

  int n_workers = workers > 0 ? workers
                              : static_cast<int>(std::thread::hardware_concurrency());
  if (n_workers < 1) n_workers = 1;
  n_workers = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(n_workers), n_chunks));
  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  const Partial total = reduce_pairwise(partials, 0, n_chunks);
  const double n = static_cast<double>(n_items);
  McEstimate est;
  static constexpr int rows[6] = {0, 0, 0, 1, 1, 2};
  static constexpr int cols[6] = {0, 1, 2, 1, 2, 2};
  for (int e = 0; e < 6; ++e) {
    const double mean = total.sum[e] / n;
    const double var =
        n > 1 ? std::max(0.0, (total.sum_sq[e] - total.sum[e] * mean) / (n - 1))
              : 0.0;
    const double se = std::sqrt(var / n);
    est.mean_matrix(rows[e], cols[e]) = mean;
    est.mean_matrix(cols[e], rows[e]) = mean;
    est.standard_error_matrix(rows[e], cols[e]) = se;
    est.standard_error_matrix(cols[e], rows[e]) = se;
  }
  return est;
}

}  // namespace

BlochVector tone_trajectory(double psi, double x, double beta, double alpha,
                            int steps_per_rabi_cycle) {
  if (!(psi > 0)) throw std::invalid_argument("tone_trajectory: psi must be > 0");
  if (steps_per_rabi_cycle < 1) {
    throw std::invalid_argument("tone_trajectory: steps_per_rabi_cycle must be >= 1");
  }
  const long long k_steps = std::max<long long>(
      1, static_cast<long long>(std::ceil(steps_per_rabi_cycle * psi / (2 * kPi))));
  const double dpsi = psi / static_cast<double>(k_steps);
  const double c = std::cos(dpsi), s = std::sin(dpsi);
  BlochVector j(1, 0, 0);
  for (long long k = 0; k < k_steps; ++k) {
    const double mid = (static_cast<double>(k) + 0.5) * dpsi;
    rotate_step(j, beta * std::sin(x * mid + alpha), c, s);
  }
  return j - BlochVector(1, 0, 0);
}

McEstimate mc_tone_transfer(double psi, double x, const McConfig& cfg) {
  check_config(cfg);
  if (!(psi > 0)) throw std::invalid_argument("mc_tone_transfer: psi must be > 0");
  if (!(x >= 0)) throw std::invalid_argument("mc_tone_transfer: x must be >= 0");

  const double sigma = cfg.sigma_beta;
  const double scale = sigma > 0 ? 4.0 / (sigma * sigma) : 0.0;
  const int spr = cfg.steps_per_rabi_cycle;
  const std::uint64_t seed = cfg.seed;

  const long long n_items =
      cfg.antithetic ? (cfg.n_samples + 1) / 2 : cfg.n_samples;
  const bool antithetic = cfg.antithetic;

  auto per_item = [=](long long i) -> Entries {
    auto eng = sample_engine(seed, i);
    std::uniform_real_distribution<double> uni(0.0, 2 * kPi);
    const double alpha = uni(eng);
    double beta = 0;
    if (sigma > 0) {
      std::normal_distribution<double> gauss(0.0, sigma);
      beta = gauss(eng);
    }
    Entries v = outer_entries(tone_trajectory(psi, x, beta, alpha, spr));
    if (antithetic) {
      const Entries v2 =
          outer_entries(tone_trajectory(psi, x, beta, alpha + kPi / 2, spr));
      for (int e = 0; e < 6; ++e) v[e] = 0.5 * (v[e] + v2[e]);
    }
    for (int e = 0; e < 6; ++e) v[e] *= scale;
    return v;
  };

  McEstimate est = run_estimator(n_items, cfg.workers, per_item);
  est.n_samples = antithetic ? 2 * n_items : n_items;
  return est;
}

McEstimate mc_white_noise(const PulseSequence& seq, const BlochVector& j_i,
                          double l0, const McConfig& cfg) {
  check_config(cfg);
  if (seq.steps.empty()) throw std::invalid_argument("mc_white_noise: empty sequence");
  if (!(seq.f_r > 0)) throw std::invalid_argument("mc_white_noise: f_r must be > 0");
  if (std::abs(j_i.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("mc_white_noise: initial vector must be unit norm");
  }
  if (!(l0 >= 0)) throw std::invalid_argument("mc_white_noise: l0 must be >= 0");

  struct PulsePlan {
    double phi = 0;
    long long k_steps = 0;
    double c = 1, s = 0;
    double sd = 0;  // per-step phase std dev
  };
  std::vector<PulsePlan> plan;
  plan.reserve(seq.steps.size());
  BlochVector j_ideal = j_i;
  const double nominal = 2 * kPi / cfg.steps_per_rabi_cycle;
  for (const auto& step : seq.steps) {
    j_ideal = axis_xy_rotation(step.phi, step.psi) * j_ideal;
    if (step.psi == 0) continue;
    PulsePlan p;
    p.phi = step.phi;
    p.k_steps = std::max<long long>(
        1, static_cast<long long>(std::ceil(step.psi / nominal)));
    const double dpsi = step.psi / static_cast<double>(p.k_steps);
    p.c = std::cos(dpsi);
    p.s = std::sin(dpsi);
    const double dt = dpsi / (2 * kPi * seq.f_r);
    p.sd = std::sqrt(l0 / dt);
    plan.push_back(p);
  }

  const std::uint64_t seed = cfg.seed;
  const BlochVector j0 = j_i, jf = j_ideal;
  auto per_item = [=, &plan](long long i) -> Entries {
    auto eng = sample_engine(seed, i);
    BlochVector j = j0;
    for (const auto& p : plan) {
      if (p.sd > 0) {
        std::normal_distribution<double> gauss(0.0, p.sd);
        for (long long k = 0; k < p.k_steps; ++k) {
          rotate_step(j, p.phi + gauss(eng), p.c, p.s);
        }
      } else {
        for (long long k = 0; k < p.k_steps; ++k) rotate_step(j, p.phi, p.c, p.s);
      }
    }
    return outer_entries(j - jf);
  };

  McEstimate est = run_estimator(cfg.n_samples, cfg.workers, per_item);
  est.n_samples = cfg.n_samples;
  return est;
}

double tone_z_floor(const CovarianceMatrix& analytic, double sigma_beta) {
  const double tr = analytic.trace();
  return 2.0 * sigma_beta * sigma_beta * (1.0 + tr + tr * tr);
}

double white_z_floor(const CovarianceMatrix& analytic, double sigma2_total) {
  const double tr = analytic.trace();
  return 2.0 * tr * tr + tr * sigma2_total;
}

double white_sigma2_total(const PulseSequence& seq, double l0,
                          int steps_per_rabi_cycle) {
  const double nominal = 2 * kPi / steps_per_rabi_cycle;
  double total = 0.0;
  for (const auto& step : seq.steps) {
    if (step.psi == 0) continue;
    const auto k_steps = std::max<long long>(
        1, static_cast<long long>(std::ceil(step.psi / nominal)));
    const double dt = step.psi / static_cast<double>(k_steps) / (2 * kPi * seq.f_r);
    total += static_cast<double>(k_steps) * l0 / dt;
  }
  return total;
}

}  // namespace blochnoise
