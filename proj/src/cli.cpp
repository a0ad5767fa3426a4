#include "leadfollow/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <yaml-cpp/yaml.h>

#include "leadfollow/config.hpp"
#include "leadfollow/csv.hpp"
#include "leadfollow/errors.hpp"
#include "leadfollow/lyapunov_cert.hpp"

namespace leadfollow {

namespace {

namespace fs = std::filesystem;

void emit_gains(YAML::Emitter& y, const Gains& g) {
  y << YAML::BeginMap;
  y << YAML::Key << "l" << YAML::Value << g.l();
  y << YAML::Key << "k" << YAML::Value << g.k();
  y << YAML::Key << "k0" << YAML::Value << g.k0();
  y << YAML::Key << "default_observer_gain" << YAML::Value << g.default_observer_gain();
  y << YAML::EndMap;
}

void emit_certificate(YAML::Emitter& y, const LyapunovCertificate& cert) {
  y << YAML::BeginMap;
  y << YAML::Key << "valid" << YAML::Value << cert.valid;
  y << YAML::Key << "beta" << YAML::Value << cert.beta;
  y << YAML::Key << "p_min_eig" << YAML::Value << cert.p_min_eig;
  y << YAML::Key << "p_max_eig" << YAML::Value << cert.p_max_eig;
  y << YAML::Key << "gains" << YAML::Value;
  emit_gains(y, cert.gains);
  y << YAML::Key << "connected_modes" << YAML::Value << YAML::BeginSeq;
  for (const auto& m : cert.modes) {
    y << YAML::BeginMap;
    y << YAML::Key << "mode" << YAML::Value << m.index;
    y << YAML::Key << "q_min_eig" << YAML::Value << m.q_min_eig;
    y << YAML::Key << "identity_residual" << YAML::Value << m.identity_residual;
    y << YAML::Key << "k_positive_definite" << YAML::Value << m.k_positive_definite;
    y << YAML::EndMap;
  }
  y << YAML::EndSeq;
  y << YAML::Key << "excluded_modes" << YAML::Value << YAML::Flow << cert.excluded_modes;
  y << YAML::Key << "checks" << YAML::Value << YAML::BeginSeq;
  for (const auto& c : cert.checks) {
    y << YAML::Flow << YAML::BeginMap << YAML::Key << "name" << YAML::Value << c.name
      << YAML::Key << "pass" << YAML::Value << c.pass << YAML::Key << "value" << YAML::Value
      << c.value << YAML::EndMap;
  }
  y << YAML::EndSeq;
  y << YAML::EndMap;
}

void emit_bound(YAML::Emitter& y, const NoisyBoundAnalysis& b) {
  y << YAML::BeginMap;
  y << YAML::Key << "contractive" << YAML::Value << b.contractive;
  y << YAML::Key << "message" << YAML::Value << b.message;
  y << YAML::Key << "window_T" << YAML::Value << b.window;
  y << YAML::Key << "t_d" << YAML::Value << b.t_d;
  y << YAML::Key << "beta" << YAML::Value << b.beta;
  y << YAML::Key << "alpha" << YAML::Value << b.alpha;
  y << YAML::Key << "alpha0" << YAML::Value << b.alpha0;
  y << YAML::Key << "beta0" << YAML::Value << b.beta0;
  y << YAML::Key << "epsilon" << YAML::Value << b.epsilon;
  y << YAML::Key << "subinterval_factor" << YAML::Value << b.subinterval_factor;
  y << YAML::Key << "g_bar" << YAML::Value << b.g_bar;
  y << YAML::Key << "delta" << YAML::Value << b.delta;
  y << YAML::Key << "v_ultimate" << YAML::Value << b.v_ultimate;
  y << YAML::Key << "c_delta" << YAML::Value << b.c_delta;
  y << YAML::Key << "disconnected_modes" << YAML::Value << YAML::Flow << b.disconnected_modes;
  y << YAML::EndMap;
}

void emit_decay(YAML::Emitter& y, const DecayReport& r) {
  y << YAML::BeginMap;
  y << YAML::Key << "pass" << YAML::Value << r.pass;
  y << YAML::Key << "samples" << YAML::Value << r.samples;
  y << YAML::Key << "failures" << YAML::Value << r.failures;
  y << YAML::Key << "worst_ratio" << YAML::Value << r.worst_ratio;
  y << YAML::Key << "worst_time" << YAML::Value << r.worst_time;
  y << YAML::EndMap;
}

void emit_errors(YAML::Emitter& y, const Trajectory& traj) {
  const std::size_t last = traj.size() - 1;
  y << YAML::BeginMap;
  y << YAML::Key << "t_final" << YAML::Value << traj.samples[last].t;
  y << YAML::Key << "max_position_error" << YAML::Value << traj.max_position_error(last);
  y << YAML::Key << "max_velocity_error" << YAML::Value << traj.max_velocity_error(last);
  y << YAML::EndMap;
}

const char* noise_mode_name(const NoiseModel& nm) {
  switch (nm.mode()) {
    case NoiseModel::Mode::kNone:
      return "none";
    case NoiseModel::Mode::kWaveform:
      return "waveform";
    case NoiseModel::Mode::kUniformRandom:
      return "random";
  }
  return "none";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw Error("failed writing " + path.string());
}

std::optional<LyapunovCertificate> try_certify(const ScenarioConfig& cfg, const Gains& g) {
  if (!g.default_observer_gain()) return std::nullopt;
  try {
    return certify(cfg.topologies, g);
  } catch (const NotConnected&) {
    return std::nullopt;
  }
}

Trajectory run_scenario(const ScenarioConfig& cfg, const Gains& g) {
  return simulate(cfg.initial(), cfg.schedule, cfg.topologies, g, cfg.leader, cfg.noise,
                  cfg.run.step, cfg.run.t_final);
}

int cmd_simulate(const std::string& config, const std::string& out_dir, std::ostream& out) {
  const auto cfg = load_config(config);
  const Gains g = resolve_gains(cfg);
  auto traj = run_scenario(cfg, g);
  const auto cert = try_certify(cfg, g);
  if (cert && cert->valid) attach_lyapunov(traj, *cert);

  fs::create_directories(out_dir);
  emit_csv(traj, fs::path(out_dir) / "trajectory.csv");

  YAML::Emitter y;
  y.SetDoublePrecision(12);
  y << YAML::BeginMap;
  y << YAML::Key << "command" << YAML::Value << "simulate";
  y << YAML::Key << "config" << YAML::Value << config;
  y << YAML::Key << "agents" << YAML::Value << cfg.agents();
  y << YAML::Key << "dimension" << YAML::Value << cfg.run.dimension;
  y << YAML::Key << "step" << YAML::Value << cfg.run.step;
  y << YAML::Key << "samples" << YAML::Value << traj.size();
  y << YAML::Key << "noise_mode" << YAML::Value << noise_mode_name(cfg.noise);
  y << YAML::Key << "noise_bound" << YAML::Value << cfg.noise.bound();
  if (cfg.noise.mode() == NoiseModel::Mode::kUniformRandom) {
    y << YAML::Key << "noise_seed" << YAML::Value << cfg.noise.seed();
    y << YAML::Key << "noise_note" << YAML::Value
      << "seeded uniform random stress mode, held per step";
  }
  y << YAML::Key << "gains" << YAML::Value;
  emit_gains(y, g);
  y << YAML::Key << "lyapunov_attached" << YAML::Value << traj.lyapunov.has_value();
  y << YAML::Key << "final" << YAML::Value;
  emit_errors(y, traj);
  y << YAML::EndMap;
  const std::string report = std::string(y.c_str()) + "\n";
  write_text(fs::path(out_dir) / "run.yaml", report);
  out << report;
  return kExitOk;
}

int cmd_certify(const std::string& config, std::ostream& out) {
  const auto cfg = load_config(config);
  const Gains g = resolve_gains(cfg);
  const auto cert = certify(cfg.topologies, g);
  YAML::Emitter y;
  y.SetDoublePrecision(12);
  y << YAML::BeginMap << YAML::Key << "certificate" << YAML::Value;
  emit_certificate(y, cert);
  y << YAML::EndMap;
  out << y.c_str() << "\n";
  return cert.valid ? kExitOk : kExitCheckFailed;
}

int cmd_gains(const std::string& config, std::optional<double> margin, std::ostream& out) {
  const auto cfg = load_config(config);
  std::vector<std::size_t> modes;
  const auto family = connected_couplings(cfg, &modes);
  if (family.empty()) throw NotConnected("no jointly connected mode in the family");
  const auto bounds = spectral_bounds(family);
  const Gains synthesized =
      synthesize_gains(bounds, margin.value_or(cfg.gains.mode == GainSpec::Mode::kSynthesize
                                                   ? cfg.gains.margin
                                                   : kDefaultGainMargin));
  const Gains configured = resolve_gains(cfg);
  const auto v = validate_gains(configured, bounds.lambda_min, bounds.lambda_max);

  YAML::Emitter y;
  y.SetDoublePrecision(12);
  y << YAML::BeginMap;
  y << YAML::Key << "connected_modes" << YAML::Value << YAML::Flow << modes;
  y << YAML::Key << "lambda_min" << YAML::Value << bounds.lambda_min;
  y << YAML::Key << "lambda_max" << YAML::Value << bounds.lambda_max;
  y << YAML::Key << "synthesized" << YAML::Value;
  emit_gains(y, synthesized);
  y << YAML::Key << "configured" << YAML::Value;
  emit_gains(y, configured);
  y << YAML::Key << "validation" << YAML::Value << YAML::BeginSeq;
  for (const auto* c : {&v.position, &v.damping}) {
    y << YAML::Flow << YAML::BeginMap << YAML::Key << "check" << YAML::Value << c->name
      << YAML::Key << "pass" << YAML::Value << c->pass() << YAML::Key << "slack" << YAML::Value
      << c->slack() << YAML::EndMap;
  }
  y << YAML::EndSeq;
  y << YAML::Key << "observer_gain" << YAML::Value
    << (v.default_observer_gain ? "default l/k^2" : "generalized k0 (simulation-only)");
  y << YAML::Key << "pass" << YAML::Value << v.pass();
  y << YAML::EndMap;
  out << y.c_str() << "\n";
  return v.pass() ? kExitOk : kExitCheckFailed;
}

int cmd_bound(const std::string& config, double window, std::optional<int> subintervals,
              std::ostream& out, std::ostream& err) {
  const auto cfg = load_config(config);
  const Gains g = resolve_gains(cfg);
  const auto cert = certify(cfg.topologies, g);
  if (!cert.valid) {
    err << "certificate is invalid; no noisy bound available\n";
    return kExitCheckFailed;
  }
  const auto b = noisy_bound(cert, cfg.topologies, cfg.schedule, window, cfg.noise.bound(),
                             cfg.run.dimension, subintervals);
  YAML::Emitter y;
  y.SetDoublePrecision(12);
  y << YAML::BeginMap << YAML::Key << "bound" << YAML::Value;
  emit_bound(y, b);
  y << YAML::EndMap;
  out << y.c_str() << "\n";
  return b.contractive ? kExitOk : kExitCheckFailed;
}

int cmd_paper(bool noise, const std::string& out_dir, std::ostream& out) {
  const auto cfg = preset_paper_example(noise);
  const Gains g = resolve_gains(cfg);
  auto traj = run_scenario(cfg, g);
  const auto cert = certify(cfg.topologies, g);
  if (cert.valid) attach_lyapunov(traj, cert);

  fs::create_directories(out_dir);
  write_text(fs::path(out_dir) / "scenario.yaml", emit_config(cfg));
  emit_csv(traj, fs::path(out_dir) / "trajectory.csv");

  bool pass = cert.valid;
  YAML::Emitter y;
  y.SetDoublePrecision(12);
  y << YAML::BeginMap;
  y << YAML::Key << "command" << YAML::Value << (noise ? "paper --noise" : "paper");
  y << YAML::Key << "certificate" << YAML::Value;
  emit_certificate(y, cert);
  y << YAML::Key << "final" << YAML::Value;
  emit_errors(y, traj);
  if (cert.valid && !noise) {
    const auto decay = decay_check(traj, cert);
    pass = pass && decay.pass;
    y << YAML::Key << "decay_check" << YAML::Value;
    emit_decay(y, decay);
  }
  if (cert.valid && noise) {
    const double window = cfg.schedule.total_duration();
    const auto b = noisy_bound(cert, cfg.topologies, cfg.schedule, window, cfg.noise.bound(),
                               cfg.run.dimension);
    double tail = 0.0;
    for (std::size_t s = 0; s < traj.size(); ++s) {
      if (traj.samples[s].t >= 0.5 * cfg.run.t_final) tail = std::max(tail, traj.max_position_error(s));
    }
    pass = pass && b.contractive && tail <= b.c_delta;
    y << YAML::Key << "noisy_bound" << YAML::Value;
    emit_bound(y, b);
    y << YAML::Key << "tail_max_position_error" << YAML::Value << tail;
  }
  y << YAML::Key << "pass" << YAML::Value << pass;
  y << YAML::EndMap;
  const std::string report = std::string(y.c_str()) + "\n";
  write_text(fs::path(out_dir) / "report.yaml", report);
  out << report;
  return pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Leader-following multi-agent simulation and certificate checks", "leadfollow"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  std::optional<double> margin;
  double window = 0.0;
  std::optional<int> subintervals;
  bool noise = false;

  auto* sim = app.add_subcommand("simulate", "integrate a scenario and write trajectory.csv");
  sim->add_option("--config", config, "scenario file")->required();
  sim->add_option("--out", out_dir, "output directory")->required();

  auto* cert = app.add_subcommand("certify", "build and check the common Lyapunov certificate");
  cert->add_option("--config", config, "scenario file")->required();

  auto* gains = app.add_subcommand("gains", "synthesize and validate gains");
  gains->add_option("--config", config, "scenario file")->required();
  gains->add_option("--margin", margin, "relative margin above the gain bounds");

  auto* bound = app.add_subcommand("bound", "ultimate bound under bounded disturbances");
  bound->add_option("--config", config, "scenario file")->required();
  bound->add_option("--T", window, "window length in seconds")->required();
  bound->add_option("--subintervals", subintervals,
                    "subinterval count per window for the g_bar multiplier");

  auto* paper = app.add_subcommand("paper", "run the built-in four-follower example end to end");
  paper->add_flag("--noise", noise, "add delta = sin 50t disturbances");
  out_dir = "paper_out";
  paper->add_option("--out", out_dir, "output directory");

  std::vector<std::string> argv_storage{"leadfollow"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (*sim) return cmd_simulate(config, out_dir, out);
    if (*cert) return cmd_certify(config, out);
    if (*gains) return cmd_gains(config, margin, out);
    if (*bound) return cmd_bound(config, window, subintervals, out, err);
    if (*paper) return cmd_paper(noise, out_dir, out);
  } catch (const ConfigError& e) {
    for (const auto& m : e.messages()) err << m << "\n";
    return kExitConfigError;
  } catch (const Diverged& e) {
    err << e.what() << "\n";
    return kExitDiverged;
  } catch (const NotConnected& e) {
    err << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const InvalidInput& e) {
    err << e.what() << "\n";
    return kExitConfigError;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}

}  // namespace leadfollow
