#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "leadfollow/dynamics.hpp"
#include "leadfollow/gain_synthesis.hpp"
#include "leadfollow/graph_topology.hpp"

namespace leadfollow {

struct GainSpec {
  enum class Mode { kExplicit, kSynthesize };
  Mode mode = Mode::kExplicit;
  double l = 0.0;
  double k = 0.0;
  std::optional<double> k0;
  double margin = kDefaultGainMargin;

  bool operator==(const GainSpec&) const = default;
};

struct RunSpec {
  int dimension = 1;
  double step = 1e-3;
  double t_final = 20.0;

  bool operator==(const RunSpec&) const = default;
};

// A fully validated scenario: every index resolves, shapes agree, h <= dwell/4
// and the noise bound covers its waveforms.
struct ScenarioConfig {
  std::vector<Topology> topologies;
  SwitchingSchedule schedule;
  GainSpec gains;
  LeaderPolicy leader;
  Eigen::MatrixXd x;
  Eigen::MatrixXd v;
  Eigen::MatrixXd vhat;
  NoiseModel noise;
  RunSpec run;

  int agents() const { return static_cast<int>(x.rows()); }
  SystemState initial() const { return initial_state(leader, x, v, vhat); }

  bool operator==(const ScenarioConfig& o) const {
    return topologies == o.topologies && schedule == o.schedule && gains == o.gains &&
           leader == o.leader && x == o.x && v == o.v && vhat == o.vhat && noise == o.noise &&
           run == o.run;
  }
};

// Both throw ConfigError carrying every problem found. Parse errors name the
// line and column; semantic errors name the field path.
ScenarioConfig load_config(const std::filesystem::path& path);
ScenarioConfig parse_config(const std::string& text, const std::string& source = "<string>");

// YAML text that parse_config maps back to the same scenario.
std::string emit_config(const ScenarioConfig& cfg);

// Four followers, two topologies switched every 0.2 s, k=200, l=40,
// u0 = cos t. With noise, delta_i^j = sin 50t on both channels and bound 1.
// x(0) = (1, 2, 3, 4), v(0) = 0, vhat(0) = 0, leader at rest at 0,
// h = 1e-3, t_final = 20.
ScenarioConfig preset_paper_example(bool with_noise = false);

// Explicit gains as configured, or synthesized from the spectral bounds of
// the jointly connected modes.
Gains resolve_gains(const ScenarioConfig& cfg);

// Coupling matrices of the jointly connected modes (indices in `modes`).
std::vector<SymMatrix> connected_couplings(const ScenarioConfig& cfg,
                                           std::vector<std::size_t>* modes = nullptr);

}  // namespace leadfollow
