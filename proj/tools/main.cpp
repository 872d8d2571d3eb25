#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "blochnoise/covariance.hpp"
#include "blochnoise/montecarlo.hpp"
#include "blochnoise/sequences.hpp"
#include "blochnoise/spectra.hpp"
#include "blochnoise/static_errors.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kToolVersion = "blochnoise 1.0.0";
constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string file_digest(const std::string& path) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(read_file(path))));
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

struct ManifestInput {
  std::string path;
  std::string digest;
};

// Companion record for every run: <primary output>.manifest.json.  Contains
// no timestamps, so re-running with the same arguments reproduces it.
void write_manifest(const std::string& manifest_path,
                    const std::string& subcommand, const json& parameters,
                    const std::vector<ManifestInput>& inputs,
                    const std::vector<std::string>& outputs,
                    std::optional<std::uint64_t> seed = std::nullopt) {
  json m;
  m["subcommand"] = subcommand;
  m["tool_version"] = kToolVersion;
  m["parameters"] = parameters;
  m["inputs"] = json::object();
  for (const auto& in : inputs) m["inputs"][in.path] = in.digest;
  m["outputs"] = outputs;
  if (seed) m["seed"] = *seed;
  write_file(manifest_path, m.dump(2) + "\n");
}

json matrix_json(const Eigen::Matrix3d& m) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) {
    json row = json::array();
    for (int c = 0; c < 3; ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const blochnoise::BlochVector& v) {
  return json::array({v.x(), v.y(), v.z()});
}

blochnoise::SequenceKind parse_kind(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  using K = blochnoise::SequenceKind;
  if (s == "single_pi" || s == "single") return K::single_pi;
  if (s == "corpse" || s == "corpse_pi") return K::corpse_pi;
  if (s == "scrofulous" || s == "scrofulous_pi") return K::scrofulous_pi;
  if (s == "bb1" || s == "bb1_pi") return K::bb1_pi;
  if (s == "spin_echo" || s == "echo") return K::spin_echo;
  throw std::invalid_argument("unknown sequence kind: " + s);
}

blochnoise::BlochVector parse_ji(const std::string& s) {
  double x = 0, y = 0, z = 0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%lf,%lf,%lf%c", &x, &y, &z, &tail) != 3) {
    throw std::invalid_argument("--ji expects three comma-separated numbers");
  }
  blochnoise::BlochVector j(x, y, z);
  if (std::abs(j.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("--ji must be unit norm (|" + s + "| = " +
                                fmt(j.norm()) + ")");
  }
  return j;
}

blochnoise::PulseSequence load_sequence_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sequence file: " + path);
  const auto j = nlohmann::json::parse(in);
  const double f_r = j.at("f_r_hz").get<double>();
  if (j.contains("steps")) {
    blochnoise::PulseSequence seq;
    seq.f_r = f_r;
    for (const auto& s : j.at("steps")) {
      blochnoise::RotationStep step;
      step.phi = s.at("phi_rad").get<double>();
      step.psi = s.at("psi_rad").get<double>();
      step.delay_before = s.value("delay_s", 0.0);
      seq.steps.push_back(step);
    }
    return seq;
  }
  if (j.contains("kind")) {
    return blochnoise::build_sequence(parse_kind(j.at("kind").get<std::string>()),
                                      f_r);
  }
  if (j.contains("echo")) {
    const auto& e = j.at("echo");
    const std::string vs = e.value("variant", "fixed_axis");
    const auto variant = vs == "alternating"
                             ? blochnoise::EchoVariant::alternating
                             : blochnoise::EchoVariant::fixed_axis;
    return blochnoise::build_spin_echo(e.at("n").get<int>(),
                                       e.value("tau_s", 0.0), variant, f_r);
  }
  throw std::runtime_error(
      "sequence file needs one of: steps, kind, echo (" + path + ")");
}

json sequence_json(const blochnoise::PulseSequence& seq) {
  json out;
  out["f_r_hz"] = seq.f_r;
  out["steps"] = json::array();
  for (const auto& s : seq.steps) {
    out["steps"].push_back(
        {{"phi_rad", s.phi}, {"psi_rad", s.psi}, {"delay_s", s.delay_before}});
  }
  return out;
}

json projections_json(const blochnoise::CovarianceMatrix& w) {
  using blochnoise::BlochVector;
  json p;
  p["x"] = blochnoise::project_variance(w, BlochVector(1, 0, 0));
  p["y"] = blochnoise::project_variance(w, BlochVector(0, 1, 0));
  p["z"] = blochnoise::project_variance(w, BlochVector(0, 0, 1));
  return p;
}

// --- transfer -------------------------------------------------------------

struct TransferArgs {
  double psi = kPi;
  double x_min = 0.05;
  double x_max = 4.0;
  int points = 400;
  std::string out;
};

int cmd_transfer(const TransferArgs& a) {
  if (!(a.psi >= 0)) throw std::invalid_argument("--psi must be >= 0");
  if (!(a.x_min > 0 && a.x_min < a.x_max)) {
    throw std::invalid_argument("need 0 < --x-min < --x-max");
  }
  if (a.points < 2) throw std::invalid_argument("--points must be >= 2");

  std::ostringstream csv;
  csv << "# transfer matrix scan\n";
  csv << "# psi_rad=" << fmt(a.psi) << " x_min=" << fmt(a.x_min)
      << " x_max=" << fmt(a.x_max) << " points=" << a.points << "\n";
  csv << "x,t_yy,t_zz,t_yz\n";
  for (int i = 0; i < a.points; ++i) {
    const double x =
        a.x_min + (a.x_max - a.x_min) * i / static_cast<double>(a.points - 1);
    const blochnoise::CovarianceMatrix t = blochnoise::transfer_tilde(a.psi, x);
    csv << fmt(x) << ',' << fmt(t(1, 1)) << ',' << fmt(t(2, 2)) << ','
        << fmt(t(1, 2)) << "\n";
  }
  write_file(a.out, csv.str());

  json params;
  params["psi"] = a.psi;
  params["x_min"] = a.x_min;
  params["x_max"] = a.x_max;
  params["points"] = a.points;
  params["out"] = a.out;
  write_manifest(a.out + ".manifest.json", "transfer", params, {}, {a.out});
  return 0;
}

// --- composite-map ----------------------------------------------------------

struct CompositeMapArgs {
  std::string kind = "corpse";
  int grid = 0;
  double f_r = 1.0;
  double l0_dbc = 0.0;
  bool physical = false;  // set when --f-r/--l0-dbc were given
  std::string out;
};

int cmd_composite_map(const CompositeMapArgs& a) {
  const auto kind = parse_kind(a.kind);
  if (kind == blochnoise::SequenceKind::spin_echo) {
    throw std::invalid_argument("composite-map: use one of the composite kinds");
  }
  if (a.grid < 2) throw std::invalid_argument("--grid must be >= 2");

  const double f_r = a.physical ? a.f_r : 1.0;
  const double l0 = a.physical ? blochnoise::dbc_to_linear(a.l0_dbc) : 1.0;
  const double norm = f_r * l0;  // values reported in units of f_r * l0
  const auto seq = blochnoise::build_sequence(kind, f_r);

  std::ostringstream csv;
  csv << "# composite-pulse noise map, values in units of f_r*l0\n";
  csv << "# kind=" << a.kind << " grid=" << a.grid << " f_r_hz=" << fmt(f_r)
      << " l0_rad2_hz=" << fmt(l0) << "\n";
  csv << "theta_i,phi_i,w_zz,infidelity\n";
  for (int i = 0; i < a.grid; ++i) {
    const double theta = (kPi / 2) * i / static_cast<double>(a.grid - 1);
    for (int j = 0; j < a.grid; ++j) {
      const double phi = kPi * j / static_cast<double>(a.grid - 1);
      const auto res = blochnoise::propagate_noise(
          blochnoise::bloch_from_angles(theta, phi), seq, l0);
      const auto& w = res.final_noise();
      csv << fmt(theta) << ',' << fmt(phi) << ',' << fmt(w(2, 2) / norm) << ','
          << fmt(w.trace() / 4.0 / norm) << "\n";
    }
  }
  write_file(a.out, csv.str());

  json params;
  params["kind"] = a.kind;
  params["grid"] = a.grid;
  params["f_r"] = f_r;
  params["l0"] = l0;
  params["out"] = a.out;
  write_manifest(a.out + ".manifest.json", "composite-map", params, {}, {a.out});
  return 0;
}

// --- sequence ---------------------------------------------------------------

struct SequenceArgs {
  std::string file;
  std::optional<double> l0_dbc;
  std::optional<double> l0;
  std::string spectrum;
  std::optional<double> f_r;
  std::string ji = "1,0,0";
  std::string out;
};

int cmd_sequence(const SequenceArgs& a) {
  auto seq = load_sequence_file(a.file);
  if (a.f_r) seq.f_r = *a.f_r;
  const auto j_i = parse_ji(a.ji);

  std::vector<ManifestInput> inputs{{a.file, file_digest(a.file)}};
  json report;
  report["sequence"] = sequence_json(seq);
  report["initial"] = vector_json(j_i);

  if (!a.spectrum.empty()) {
    if (seq.steps.size() > 1) {
      std::cerr << "error: multi-pulse propagation assumes white phase noise "
                   "(pulse-to-pulse correlations are dropped by the covariance "
                   "recursion); a structured spectrum is only valid for a "
                   "single pulse. Pass --l0 or --l0-dbc instead.\n";
      return 2;
    }
    std::ifstream in(a.spectrum);
    if (!in) throw std::runtime_error("cannot open spectrum file: " + a.spectrum);
    const auto spec = blochnoise::load_datasheet_csv(in);
    inputs.push_back({a.spectrum, file_digest(a.spectrum)});

    const auto& step = seq.steps.front();
    const auto ni = blochnoise::noise_matrix_tilde(spec, step.psi, seq.f_r);
    const blochnoise::BlochVector j_f =
        blochnoise::axis_xy_rotation(step.phi, step.psi) * j_i;
    const blochnoise::CovarianceMatrix w =
        blochnoise::transform_covariance(ni.matrix, step.phi, j_f);

    report["spectrum"] = {{"model", "tabulated"},
                          {"source", a.spectrum},
                          {"extrapolated", ni.extrapolated}};
    json fin;
    fin["j_ideal"] = vector_json(j_f);
    fin["v_tilde"] = matrix_json(ni.matrix);
    fin["w"] = matrix_json(w);
    fin["projections"] = projections_json(w);
    fin["infidelity"] = w.trace() / 4.0;
    report["final"] = fin;
  } else {
    const double l0 =
        a.l0 ? *a.l0 : blochnoise::dbc_to_linear(a.l0_dbc.value());
    report["spectrum"] = {{"model", "white"}, {"l0_rad2_hz", l0}};

    const auto res = blochnoise::propagate_noise(j_i, seq, l0);
    const auto metrics = blochnoise::fidelity_metrics(res, seq, l0);
    report["steps"] = json::array();
    for (std::size_t k = 0; k < res.ideal.size(); ++k) {
      report["steps"].push_back({{"j_ideal", vector_json(res.ideal[k])},
                                 {"w", matrix_json(res.noise[k])}});
    }
    json fin;
    fin["j_ideal"] = vector_json(res.final_ideal());
    fin["w"] = matrix_json(res.final_noise());
    fin["projections"] = projections_json(res.final_noise());
    fin["infidelity"] = metrics.infidelity;
    fin["average_infidelity"] = metrics.average_infidelity;
    report["final"] = fin;
  }

  write_file(a.out, report.dump(2) + "\n");

  json params;
  params["file"] = a.file;
  if (a.l0) params["l0"] = *a.l0;
  if (a.l0_dbc) params["l0_dbc"] = *a.l0_dbc;
  if (!a.spectrum.empty()) params["spectrum"] = a.spectrum;
  if (a.f_r) params["f_r"] = *a.f_r;
  params["ji"] = a.ji;
  params["out"] = a.out;
  write_manifest(a.out + ".manifest.json", "sequence", params, inputs, {a.out});
  return 0;
}

// --- mc-verify ----------------------------------------------------------------

struct McVerifyArgs {
  std::string target;
  double psi = kPi;
  double x = 1.0;
  std::string kind = "single_pi";
  int echo_n = 1;
  double tau = 0.0;
  std::string echo_variant = "fixed_axis";
  std::string ji = "1,0,0";
  double l0 = 1e-6;
  double f_r = 1.0;
  long long samples = 10000;
  std::uint64_t seed = 0;
  int steps = 64;
  int workers = 1;
  double sigma_beta = 1e-3;
  bool antithetic = true;
  std::string out;
};

int cmd_mc_verify(const McVerifyArgs& a) {
  blochnoise::McConfig cfg;
  cfg.n_samples = a.samples;
  cfg.steps_per_rabi_cycle = a.steps;
  cfg.seed = a.seed;
  cfg.antithetic = a.antithetic;
  cfg.sigma_beta = a.sigma_beta;
  cfg.workers = a.workers;

  blochnoise::CovarianceMatrix analytic;
  blochnoise::McEstimate est;
  double sigma2_total = 0;  // white target: in-band noise power per trajectory
  json params_out;          // target-specific parameter echo inside the report

  if (a.target == "tone") {
    analytic = blochnoise::transfer_tilde(a.psi, a.x);
    est = blochnoise::mc_tone_transfer(a.psi, a.x, cfg);
    params_out = {{"psi", a.psi},
                  {"x", a.x},
                  {"sigma_beta", a.sigma_beta},
                  {"antithetic", a.antithetic}};
  } else if (a.target == "white") {
    const auto kind = parse_kind(a.kind);
    const auto j_i = parse_ji(a.ji);
    blochnoise::PulseSequence seq;
    if (kind == blochnoise::SequenceKind::spin_echo) {
      const auto variant = a.echo_variant == "alternating"
                               ? blochnoise::EchoVariant::alternating
                               : blochnoise::EchoVariant::fixed_axis;
      seq = blochnoise::build_spin_echo(a.echo_n, a.tau, variant, a.f_r);
      analytic = blochnoise::spin_echo_noise(a.echo_n, j_i, a.f_r, a.l0);
    } else {
      seq = blochnoise::build_sequence(kind, a.f_r);
      const double theta = std::asin(std::clamp(j_i.z(), -1.0, 1.0));
      const double phi = std::atan2(j_i.y(), j_i.x());
      analytic =
          blochnoise::closed_form_noise(kind, theta, phi, a.f_r, a.l0);
    }
    est = blochnoise::mc_white_noise(seq, j_i, a.l0, cfg);
    sigma2_total = blochnoise::white_sigma2_total(seq, a.l0, a.steps);
    params_out = {{"kind", a.kind}, {"echo_n", a.echo_n}, {"tau", a.tau},
                  {"ji", a.ji},     {"l0", a.l0},         {"f_r", a.f_r}};
  } else {
    throw std::invalid_argument("--target must be tone or white");
  }

  const double floor =
      a.target == "tone"
          ? blochnoise::tone_z_floor(analytic, a.sigma_beta)
          : blochnoise::white_z_floor(analytic, sigma2_total);
  Eigen::Matrix3d z, se_eff;
  json within = json::array();
  double max_abs_z = 0;
  bool underpowered = false;
  // Entries at rounding level relative to the matrix scale are treated as
  // structural zeros by the power check.
  const double significant = 1e-9 * analytic.cwiseAbs().maxCoeff();
  for (int r = 0; r < 3; ++r) {
    json wrow = json::array();
    for (int c = 0; c < 3; ++c) {
      const double se = est.standard_error_matrix(r, c);
      se_eff(r, c) = std::hypot(se, floor);
      const double diff = est.mean_matrix(r, c) - analytic(r, c);
      z(r, c) = diff / std::max(se_eff(r, c), 1e-300);
      max_abs_z = std::max(max_abs_z, std::abs(z(r, c)));
      wrow.push_back(std::abs(z(r, c)) <= 3.0);
      if (std::abs(analytic(r, c)) > significant &&
          se_eff(r, c) > 0.5 * std::abs(analytic(r, c))) {
        underpowered = true;
      }
    }
    within.push_back(wrow);
  }

  json report;
  report["target"] = a.target;
  report["parameters"] = params_out;
  report["samples"] = est.n_samples;
  report["seed"] = a.seed;
  report["steps_per_rabi_cycle"] = a.steps;
  report["analytic"] = matrix_json(analytic);
  report["mc_mean"] = matrix_json(est.mean_matrix);
  report["standard_error"] = matrix_json(est.standard_error_matrix);
  report["z_floor"] = floor;
  report["z"] = matrix_json(z);
  report["within_3se"] = within;
  report["max_abs_z"] = max_abs_z;
  report["underpowered"] = underpowered;
  report["pass"] = max_abs_z <= 4.0;
  write_file(a.out, report.dump(2) + "\n");

  json params;
  params["target"] = a.target;
  if (a.target == "tone") {
    params["psi"] = a.psi;
    params["x"] = a.x;
  } else {
    params["kind"] = a.kind;
    params["echo_n"] = a.echo_n;
    params["tau"] = a.tau;
    params["ji"] = a.ji;
    params["l0"] = a.l0;
    params["f_r"] = a.f_r;
  }
  params["samples"] = a.samples;
  params["seed"] = a.seed;
  params["steps"] = a.steps;
  params["workers"] = a.workers;
  params["sigma_beta"] = a.sigma_beta;
  params["antithetic"] = a.antithetic;
  params["out"] = a.out;
  write_manifest(a.out + ".manifest.json", "mc-verify", params, {}, {a.out},
                 a.seed);
  return max_abs_z > 4.0 ? 1 : 0;
}

// --- static-order -------------------------------------------------------------

struct StaticOrderArgs {
  std::string kind;
  double phi_i = 0.0;
  double theta_i = 0.0;
  std::string which;
  std::string metric;
  std::string out;
};

int cmd_static_order(const StaticOrderArgs& a) {
  const auto kind = parse_kind(a.kind);
  if (kind == blochnoise::SequenceKind::spin_echo) {
    throw std::invalid_argument("static-order: use one of the composite kinds");
  }
  blochnoise::ErrorChannel which;
  if (a.which == "amplitude") {
    which = blochnoise::ErrorChannel::amplitude;
  } else if (a.which == "detuning") {
    which = blochnoise::ErrorChannel::detuning;
  } else {
    throw std::invalid_argument("--which must be amplitude or detuning");
  }
  blochnoise::ErrorMetric metric;
  if (a.metric == "w_zz") {
    metric = blochnoise::ErrorMetric::w_zz;
  } else if (a.metric == "infidelity") {
    metric = blochnoise::ErrorMetric::infidelity;
  } else {
    throw std::invalid_argument("--metric must be w_zz or infidelity");
  }

  const auto fit = blochnoise::cancellation_order(
      blochnoise::build_sequence(kind, 1.0),
      blochnoise::bloch_from_angles(a.theta_i, a.phi_i), which, metric);

  json report;
  report["kind"] = a.kind;
  report["theta_i"] = a.theta_i;
  report["phi_i"] = a.phi_i;
  report["which"] = a.which;
  report["metric"] = a.metric;
  report["exact"] = fit.exact;
  report["order"] = fit.order;
  report["slope"] = fit.slope;
  report["residual"] = fit.residual;
  report["ambiguous"] = !fit.exact && fit.residual > 0.2;
  report["sweep"] = json::array();
  for (std::size_t k = 0; k < fit.errors.size(); ++k) {
    report["sweep"].push_back(
        {{"error", fit.errors[k]}, {"value", fit.metrics[k]}});
  }

  json params;
  params["kind"] = a.kind;
  params["phi_i"] = a.phi_i;
  params["theta_i"] = a.theta_i;
  params["which"] = a.which;
  params["metric"] = a.metric;

  if (a.out.empty()) {
    std::cout << report.dump(2) << "\n";
    write_manifest("static-order.manifest.json", "static-order", params, {}, {});
  } else {
    params["out"] = a.out;
    write_file(a.out, report.dump(2) + "\n");
    write_manifest(a.out + ".manifest.json", "static-order", params, {},
                   {a.out});
  }
  return 0;
}

// --- spectrum-convert -----------------------------------------------------------

struct SpectrumConvertArgs {
  std::string in;
  std::string out;
};

int cmd_spectrum_convert(const SpectrumConvertArgs& a) {
  std::ifstream in(a.in);
  if (!in) throw std::runtime_error("cannot open input file: " + a.in);
  const auto spec = blochnoise::load_datasheet_csv(in);
  const auto& tab = std::get<blochnoise::TabulatedNoise>(spec.model());

  std::ostringstream csv;
  csv << "# single-sideband phase noise, linear units\n";
  csv << "f_hz,l_rad2_hz\n";
  for (const auto& p : tab.points) {
    csv << fmt(p.f) << ',' << fmt(p.l) << "\n";
  }
  write_file(a.out, csv.str());

  json params;
  params["in"] = a.in;
  params["out"] = a.out;
  write_manifest(a.out + ".manifest.json", "spectrum-convert", params,
                 {{a.in, file_digest(a.in)}}, {a.out});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local-oscillator phase noise on the Bloch sphere"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  int rc = 0;

  TransferArgs ta;
  auto* transfer = app.add_subcommand(
      "transfer", "Scan the noise transfer matrix over tone frequency");
  transfer->add_option("--psi", ta.psi, "rotation angle, rad")->required();
  transfer->add_option("--x-min", ta.x_min, "lowest f_m/f_r")->required();
  transfer->add_option("--x-max", ta.x_max, "highest f_m/f_r")->required();
  transfer->add_option("--points", ta.points, "grid size")->required();
  transfer->add_option("--out", ta.out, "output CSV")->required();
  transfer->callback([&] { rc = cmd_transfer(ta); });

  CompositeMapArgs ca;
  auto* cmap = app.add_subcommand(
      "composite-map",
      "Map end-of-sequence noise over initial states (units of f_r*l0)");
  cmap->add_option("--kind", ca.kind,
                   "single_pi | corpse | scrofulous | bb1")->required();
  cmap->add_option("--grid", ca.grid, "points per axis")->required();
  auto* cfr = cmap->add_option("--f-r", ca.f_r, "Rabi frequency, Hz");
  auto* cl0 = cmap->add_option("--l0-dbc", ca.l0_dbc, "white level, dBc/Hz");
  cfr->needs(cl0);
  cl0->needs(cfr);
  cmap->add_option("--out", ca.out, "output CSV")->required();
  cmap->callback([&] {
    ca.physical = cfr->count() > 0;
    rc = cmd_composite_map(ca);
  });

  SequenceArgs sa;
  auto* seqc = app.add_subcommand(
      "sequence", "Propagate noise through a pulse sequence file");
  seqc->add_option("--file", sa.file, "sequence JSON file")->required();
  double sa_l0_dbc = 0, sa_l0 = 0;
  auto* sdbc = seqc->add_option("--l0-dbc", sa_l0_dbc, "white level, dBc/Hz");
  auto* slin = seqc->add_option("--l0", sa_l0, "white level, rad^2/Hz");
  auto* sspec = seqc->add_option("--spectrum", sa.spectrum,
                                 "datasheet CSV (single pulse only)");
  sdbc->excludes(slin)->excludes(sspec);
  slin->excludes(sspec);
  double sa_f_r = 0;
  auto* sfr = seqc->add_option("--f-r", sa_f_r,
                               "override the file's Rabi frequency, Hz");
  seqc->add_option("--ji", sa.ji, "initial Bloch vector x,y,z");
  seqc->add_option("--out", sa.out, "output JSON")->required();
  seqc->callback([&] {
    if (sdbc->count()) sa.l0_dbc = sa_l0_dbc;
    if (slin->count()) sa.l0 = sa_l0;
    if (sfr->count()) sa.f_r = sa_f_r;
    if (!sa.l0 && !sa.l0_dbc && sa.spectrum.empty()) {
      throw CLI::ValidationError(
          "sequence", "one of --l0, --l0-dbc, --spectrum is required");
    }
    rc = cmd_sequence(sa);
  });

  McVerifyArgs ma;
  auto* mc = app.add_subcommand(
      "mc-verify", "Compare Monte Carlo estimates against analytic matrices");
  mc->add_option("--target", ma.target, "tone | white")->required();
  mc->add_option("--psi", ma.psi, "tone: rotation angle, rad");
  mc->add_option("--x", ma.x, "tone: f_m/f_r");
  mc->add_option("--kind", ma.kind,
                 "white: single_pi | corpse | scrofulous | bb1 | spin_echo");
  mc->add_option("--echo-n", ma.echo_n, "white: echo pulse count");
  mc->add_option("--tau", ma.tau, "white: echo delay, s");
  mc->add_option("--echo-variant", ma.echo_variant,
                 "white: fixed_axis | alternating");
  mc->add_option("--ji", ma.ji, "white: initial Bloch vector x,y,z");
  mc->add_option("--l0", ma.l0, "white: noise level, rad^2/Hz");
  mc->add_option("--f-r", ma.f_r, "white: Rabi frequency, Hz");
  mc->add_option("--samples", ma.samples, "trajectory count")->required();
  mc->add_option("--seed", ma.seed, "RNG seed")->required();
  mc->add_option("--steps", ma.steps, "steps per Rabi cycle");
  mc->add_option("--workers", ma.workers, "worker threads (<=0: hardware)");
  mc->add_option("--sigma-beta", ma.sigma_beta, "tone: modulation depth scale");
  mc->add_flag("--antithetic,!--no-antithetic", ma.antithetic,
               "tone: quadrature-phase pairing");
  mc->add_option("--out", ma.out, "output JSON")->required();
  mc->callback([&] { rc = cmd_mc_verify(ma); });

  StaticOrderArgs oa;
  auto* so = app.add_subcommand(
      "static-order", "Fit the cancellation order of a static control error");
  so->add_option("--kind", oa.kind,
                 "single_pi | corpse | scrofulous | bb1")->required();
  so->add_option("--phi-i", oa.phi_i, "initial azimuth, rad")->required();
  so->add_option("--theta-i", oa.theta_i, "initial elevation, rad");
  so->add_option("--which", oa.which, "amplitude | detuning")->required();
  so->add_option("--metric", oa.metric, "w_zz | infidelity")->required();
  so->add_option("--out", oa.out, "output JSON (default: stdout)");
  so->callback([&] { rc = cmd_static_order(oa); });

  SpectrumConvertArgs va;
  auto* conv = app.add_subcommand(
      "spectrum-convert", "Convert a dBc/Hz datasheet CSV to rad^2/Hz");
  conv->add_option("--in", va.in, "input CSV, dBc/Hz")->required();
  conv->add_option("--out", va.out, "output CSV, rad^2/Hz")->required();
  conv->callback([&] { rc = cmd_spectrum_convert(va); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
