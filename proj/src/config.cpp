#include "leadfollow/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "leadfollow/errors.hpp"
#include "leadfollow/spectral.hpp"

namespace leadfollow {

namespace {

class Reader {
 public:
  std::vector<std::string> errors;

  void fail(const std::string& path, const std::string& msg, const YAML::Node& at = {}) {
    std::ostringstream out;
    out << path << ": " << msg;
    if (at.IsDefined() && at.Mark().line >= 0) out << " (line " << at.Mark().line + 1 << ")";
    errors.push_back(out.str());
  }

  std::optional<double> number(const YAML::Node& n, const std::string& path) {
    if (!n.IsDefined() || n.IsNull()) {
      fail(path, "required number is missing");
      return std::nullopt;
    }
    try {
      if (!n.IsScalar()) throw YAML::Exception(n.Mark(), "");
      const double value = n.as<double>();
      if (!std::isfinite(value)) {
        fail(path, "must be finite", n);
        return std::nullopt;
      }
      return value;
    } catch (const YAML::Exception&) {
      fail(path, "expected a number", n);
      return std::nullopt;
    }
  }

  std::optional<double> optional_number(const YAML::Node& n, const std::string& path) {
    if (!n.IsDefined() || n.IsNull()) return std::nullopt;
    return number(n, path);
  }

  std::optional<long long> integer(const YAML::Node& n, const std::string& path) {
    if (!n.IsDefined() || n.IsNull()) {
      fail(path, "required integer is missing");
      return std::nullopt;
    }
    try {
      if (!n.IsScalar()) throw YAML::Exception(n.Mark(), "");
      return n.as<long long>();
    } catch (const YAML::Exception&) {
      fail(path, "expected an integer", n);
      return std::nullopt;
    }
  }

  std::optional<bool> boolean(const YAML::Node& n, const std::string& path) {
    try {
      if (!n.IsScalar()) throw YAML::Exception(n.Mark(), "");
      return n.as<bool>();
    } catch (const YAML::Exception&) {
      fail(path, "expected true or false", n);
      return std::nullopt;
    }
  }

  std::optional<std::string> text(const YAML::Node& n, const std::string& path) {
    if (!n.IsDefined() || !n.IsScalar()) {
      fail(path, "required string is missing");
      return std::nullopt;
    }
    return n.as<std::string>();
  }

  std::optional<Eigen::VectorXd> vector(const YAML::Node& n, const std::string& path) {
    if (!n.IsDefined() || !n.IsSequence()) {
      fail(path, "expected a list of numbers", n);
      return std::nullopt;
    }
    Eigen::VectorXd out(static_cast<Eigen::Index>(n.size()));
    bool ok = true;
    for (std::size_t i = 0; i < n.size(); ++i) {
      const auto v = number(n[i], path + "[" + std::to_string(i) + "]");
      if (v) out(static_cast<Eigen::Index>(i)) = *v; else ok = false;
    }
    if (!ok) return std::nullopt;
    return out;
  }

  std::optional<Eigen::MatrixXd> matrix(const YAML::Node& n, const std::string& path) {
    if (!n.IsDefined() || !n.IsSequence() || n.size() == 0) {
      fail(path, "expected a non-empty list of rows", n);
      return std::nullopt;
    }
    const std::size_t rows = n.size();
    std::optional<std::size_t> cols;
    Eigen::MatrixXd out;
    bool ok = true;
    for (std::size_t i = 0; i < rows; ++i) {
      const auto row = vector(n[i], path + "[" + std::to_string(i) + "]");
      if (!row) {
        ok = false;
        continue;
      }
      if (!cols) {
        cols = static_cast<std::size_t>(row->size());
        out.resize(static_cast<Eigen::Index>(rows), row->size());
      }
      if (static_cast<std::size_t>(row->size()) != *cols) {
        fail(path + "[" + std::to_string(i) + "]", "row length differs from the first row", n[i]);
        ok = false;
        continue;
      }
      out.row(static_cast<Eigen::Index>(i)) = row->transpose();
    }
    if (!ok) return std::nullopt;
    return out;
  }

  std::optional<Waveform> waveform(const YAML::Node& n, const std::string& path) {
    if (!n.IsDefined() || !n.IsMap()) {
      fail(path, "expected a waveform map with a 'kind' key", n);
      return std::nullopt;
    }
    const auto kind = text(n["kind"], path + ".kind");
    if (!kind) return std::nullopt;
    if (*kind == "constant") {
      const auto c = number(n["value"], path + ".value");
      if (c) return Waveform::constant(*c);
      return std::nullopt;
    }
    if (*kind == "sine" || *kind == "cosine") {
      const auto a = number(n["amplitude"], path + ".amplitude");
      const auto w = number(n["frequency"], path + ".frequency");
      const auto phase = optional_number(n["phase"], path + ".phase");
      if (!a || !w) return std::nullopt;
      return *kind == "sine" ? Waveform::sine(*a, *w, phase.value_or(0.0))
                             : Waveform::cosine(*a, *w, phase.value_or(0.0));
    }
    if (*kind == "polynomial") {
      const auto c = vector(n["coefficients"], path + ".coefficients");
      if (!c) return std::nullopt;
      if (c->size() == 0) {
        fail(path + ".coefficients", "needs at least one coefficient", n);
        return std::nullopt;
      }
      return Waveform::polynomial(std::vector<double>(c->data(), c->data() + c->size()));
    }
    fail(path + ".kind", "unknown waveform kind '" + *kind +
                             "' (expected constant, sine, cosine or polynomial)",
         n["kind"]);
    return std::nullopt;
  }

  // A single waveform applied to every agent, or a list with one per agent.
  std::optional<std::vector<Waveform>> per_agent_waveforms(const YAML::Node& n,
                                                           const std::string& path,
                                                           std::optional<int> agents) {
    if (n.IsDefined() && n.IsMap()) {
      const auto w = waveform(n, path);
      if (!w || !agents) return std::nullopt;
      return std::vector<Waveform>(static_cast<std::size_t>(*agents), *w);
    }
    if (!n.IsDefined() || !n.IsSequence()) {
      fail(path, "expected a waveform or a list of waveforms", n);
      return std::nullopt;
    }
    std::vector<Waveform> out;
    bool ok = true;
    for (std::size_t i = 0; i < n.size(); ++i) {
      const auto w = waveform(n[i], path + "[" + std::to_string(i) + "]");
      if (w) out.push_back(*w); else ok = false;
    }
    if (agents && static_cast<int>(out.size()) != *agents && ok) {
      fail(path, "has " + std::to_string(out.size()) + " waveforms, expected one per agent (" +
                     std::to_string(*agents) + ")", n);
      ok = false;
    }
    if (!ok) return std::nullopt;
    return out;
  }
};

constexpr const char* kRequiredSections[] = {"run",    "topologies", "schedule",
                                             "gains",  "leader",     "followers"};

ScenarioConfig build(const YAML::Node& root) {
  Reader r;
  if (!root.IsDefined() || root.IsNull() || !root.IsMap()) {
    for (const char* s : kRequiredSections) r.fail(s, "required section is missing");
    throw ConfigError(r.errors);
  }
  for (const char* s : kRequiredSections) {
    if (!root[s].IsDefined()) r.fail(s, "required section is missing");
  }
  for (auto it = root.begin(); it != root.end(); ++it) {
    const auto key = it->first.as<std::string>();
    if (key != "noise" && std::find(std::begin(kRequiredSections), std::end(kRequiredSections),
                                    key) == std::end(kRequiredSections)) {
      r.fail(key, "unknown section", it->first);
    }
  }

  // run
  RunSpec run;
  bool run_ok = false;
  if (const auto n = root["run"]; n.IsDefined()) {
    const auto dim = n["dimension"].IsDefined() ? r.integer(n["dimension"], "run.dimension")
                                                : std::optional<long long>(1);
    const auto step = r.number(n["step"], "run.step");
    const auto t_final = r.number(n["t_final"], "run.t_final");
    run_ok = dim && step && t_final;
    if (dim && *dim < 1) {
      r.fail("run.dimension", "must be >= 1", n["dimension"]);
      run_ok = false;
    }
    if (step && !(*step > 0.0)) {
      r.fail("run.step", "must be > 0", n["step"]);
      run_ok = false;
    }
    if (t_final && !(*t_final > 0.0)) {
      r.fail("run.t_final", "must be > 0", n["t_final"]);
      run_ok = false;
    }
    if (run_ok) {
      run = {static_cast<int>(*dim), *step, *t_final};
      const auto steps = std::llround(run.t_final / run.step);
      if (steps < 1 || std::abs(static_cast<double>(steps) * run.step - run.t_final) >
                           1e-9 * run.t_final) {
        r.fail("run.t_final", "must be an integer multiple of run.step", n["t_final"]);
      }
    }
  }

  // followers
  std::optional<int> agents;
  Eigen::MatrixXd fx, fv, fvhat;
  if (const auto n = root["followers"]; n.IsDefined()) {
    const auto x = r.matrix(n["x"], "followers.x");
    if (x) {
      fx = *x;
      agents = static_cast<int>(x->rows());
      if (run_ok && x->cols() != run.dimension) {
        r.fail("followers.x", "rows must have run.dimension=" + std::to_string(run.dimension) +
                                  " entries", n["x"]);
      }
      for (const auto* key : {"v", "vhat"}) {
        Eigen::MatrixXd& dst = std::string(key) == "v" ? fv : fvhat;
        dst = Eigen::MatrixXd::Zero(x->rows(), x->cols());
        if (n[key].IsDefined()) {
          const auto m = r.matrix(n[key], std::string("followers.") + key);
          if (m && (m->rows() != x->rows() || m->cols() != x->cols())) {
            r.fail(std::string("followers.") + key, "shape must match followers.x", n[key]);
          } else if (m) {
            dst = *m;
          }
        }
      }
    }
  }

  // topologies
  std::vector<Topology> topologies;
  if (const auto n = root["topologies"]; n.IsDefined()) {
    if (!n.IsSequence() || n.size() == 0) {
      r.fail("topologies", "expected a non-empty list", n);
    } else {
      for (std::size_t p = 0; p < n.size(); ++p) {
        const std::string path = "topologies[" + std::to_string(p) + "]";
        const auto w = r.matrix(n[p]["weights"], path + ".weights");
        const auto b = r.vector(n[p]["leader_weights"], path + ".leader_weights");
        if (!w || !b) continue;
        if (agents && w->rows() != *agents) {
          r.fail(path + ".weights", "has " + std::to_string(w->rows()) + " agents, followers.x has " +
                                        std::to_string(*agents), n[p]["weights"]);
          continue;
        }
        try {
          topologies.emplace_back(*w, *b);
        } catch (const InvalidInput& e) {
          r.fail(path, e.what(), n[p]);
        }
      }
    }
  }

  // schedule
  std::optional<SwitchingSchedule> schedule;
  if (const auto n = root["schedule"]; n.IsDefined()) {
    const auto dwell = r.number(n["dwell"], "schedule.dwell");
    const auto cycle = n["cycle"].IsDefined() ? r.boolean(n["cycle"], "schedule.cycle")
                                              : std::optional<bool>(true);
    std::vector<ScheduleEntry> entries;
    bool ok = dwell && cycle;
    if (dwell && !(*dwell > 0.0)) {
      r.fail("schedule.dwell", "must be > 0", n["dwell"]);
      ok = false;
    }
    const auto list = n["entries"];
    if (!list.IsDefined() || !list.IsSequence() || list.size() == 0) {
      r.fail("schedule.entries", "expected a non-empty list", list);
      ok = false;
    } else {
      for (std::size_t j = 0; j < list.size(); ++j) {
        const std::string path = "schedule.entries[" + std::to_string(j) + "]";
        const auto idx = r.integer(list[j]["topology"], path + ".topology");
        const auto dur = r.number(list[j]["duration"], path + ".duration");
        if (!idx || !dur) {
          ok = false;
          continue;
        }
        if (*idx < 0 || (!topologies.empty() && static_cast<std::size_t>(*idx) >= topologies.size())) {
          r.fail(path + ".topology", "index " + std::to_string(*idx) + " does not name a topology",
                 list[j]["topology"]);
          ok = false;
        }
        if (dwell && !(*dur >= *dwell)) {
          r.fail(path + ".duration", "duration " + std::to_string(*dur) + " is shorter than dwell " +
                                         std::to_string(*dwell), list[j]["duration"]);
          ok = false;
        }
        entries.push_back({static_cast<std::size_t>(std::max<long long>(*idx, 0)), *dur});
      }
    }
    if (ok) {
      schedule.emplace(std::move(entries), *dwell, *cycle);
      if (run_ok && run.step > *dwell / 4.0) {
        r.fail("run.step", "step " + std::to_string(run.step) + " exceeds schedule.dwell/4 = " +
                               std::to_string(*dwell / 4.0) + " (h <= dwell/4 required)",
               root["run"]["step"]);
      }
      if (run_ok && !*cycle && schedule->total_duration() < run.t_final - 1e-12) {
        r.fail("schedule", "non-cycling schedule ends before run.t_final", n);
      }
    }
  }

  // gains
  GainSpec gains;
  if (const auto n = root["gains"]; n.IsDefined()) {
    const auto mode = n["mode"].IsDefined() ? r.text(n["mode"], "gains.mode")
                                            : std::optional<std::string>("explicit");
    if (mode && *mode == "explicit") {
      gains.mode = GainSpec::Mode::kExplicit;
      const auto l = r.number(n["l"], "gains.l");
      const auto k = r.number(n["k"], "gains.k");
      const auto k0 = r.optional_number(n["k0"], "gains.k0");
      if (l && !(*l > 0.0)) r.fail("gains.l", "must be > 0", n["l"]);
      if (k && !(*k > 0.0)) r.fail("gains.k", "must be > 0", n["k"]);
      if (k0 && !(*k0 > 0.0)) r.fail("gains.k0", "must be > 0", n["k0"]);
      gains.l = l.value_or(0.0);
      gains.k = k.value_or(0.0);
      gains.k0 = k0;
    } else if (mode && *mode == "synthesize") {
      gains.mode = GainSpec::Mode::kSynthesize;
      const auto margin = r.optional_number(n["margin"], "gains.margin");
      gains.margin = margin.value_or(kDefaultGainMargin);
      if (!(gains.margin >= 0.0)) r.fail("gains.margin", "must be >= 0", n["margin"]);
    } else if (mode) {
      r.fail("gains.mode", "expected 'explicit' or 'synthesize'", n["mode"]);
    }
  }

  // leader
  LeaderPolicy leader;
  if (const auto n = root["leader"]; n.IsDefined()) {
    const auto x0 = r.vector(n["x0"], "leader.x0");
    const auto v0 = r.vector(n["v0"], "leader.v0");
    const auto u0 = r.per_agent_waveforms(n["u0"], "leader.u0",
                                          run_ok ? std::optional<int>(run.dimension) : std::nullopt);
    if (x0) leader.x0 = *x0;
    if (v0) leader.v0 = *v0;
    if (u0) leader.u0 = *u0;
    if (run_ok) {
      if (x0 && x0->size() != run.dimension) r.fail("leader.x0", "length must equal run.dimension", n["x0"]);
      if (v0 && v0->size() != run.dimension) r.fail("leader.v0", "length must equal run.dimension", n["v0"]);
    }
  }

  // noise
  NoiseModel noise = NoiseModel::none();
  if (const auto n = root["noise"]; n.IsDefined()) {
    const auto mode = n["mode"].IsDefined() ? r.text(n["mode"], "noise.mode")
                                            : std::optional<std::string>("none");
    if (mode && *mode == "none") {
      noise = NoiseModel::none();
    } else if (mode && (*mode == "waveform" || *mode == "random")) {
      const auto bound = r.number(n["bound"], "noise.bound");
      if (bound && !(*bound >= 0.0)) r.fail("noise.bound", "must be >= 0", n["bound"]);
      if (*mode == "random") {
        const auto seed = n["seed"].IsDefined() ? r.integer(n["seed"], "noise.seed")
                                                : std::optional<long long>(0);
        if (bound && seed && *bound >= 0.0) {
          noise = NoiseModel::uniform_random(*bound, static_cast<std::uint64_t>(*seed));
        }
      } else {
        const auto pos = r.per_agent_waveforms(n["position"], "noise.position", agents);
        const auto vel = r.per_agent_waveforms(n["velocity"], "noise.velocity", agents);
        if (bound && pos && vel && *bound >= 0.0) {
          const double horizon = run_ok ? run.t_final : 0.0;
          for (std::size_t i = 0; i < pos->size(); ++i) {
            if ((*pos)[i].sup_abs(horizon) > *bound) {
              r.fail("noise.position", "waveform for agent " + std::to_string(i) +
                                           " exceeds noise.bound", n["position"]);
            }
            if ((*vel)[i].sup_abs(horizon) > *bound) {
              r.fail("noise.velocity", "waveform for agent " + std::to_string(i) +
                                           " exceeds noise.bound", n["velocity"]);
            }
          }
          noise = NoiseModel::waveforms(*pos, *vel, *bound);
        }
      }
    } else if (mode) {
      r.fail("noise.mode", "expected 'none', 'waveform' or 'random'", n["mode"]);
    }
  }

  if (!r.errors.empty()) throw ConfigError(r.errors);
  return ScenarioConfig{std::move(topologies), std::move(*schedule), gains, std::move(leader),
                        std::move(fx), std::move(fv), std::move(fvhat), std::move(noise), run};
}

void emit_waveform(YAML::Emitter& out, const Waveform& w) {
  out << YAML::Flow << YAML::BeginMap;
  switch (w.kind()) {
    case Waveform::Kind::kConstant:
      out << YAML::Key << "kind" << YAML::Value << "constant";
      out << YAML::Key << "value" << YAML::Value << w.coefficients().front();
      break;
    case Waveform::Kind::kSine:
    case Waveform::Kind::kCosine:
      out << YAML::Key << "kind" << YAML::Value
          << (w.kind() == Waveform::Kind::kSine ? "sine" : "cosine");
      out << YAML::Key << "amplitude" << YAML::Value << w.amplitude();
      out << YAML::Key << "frequency" << YAML::Value << w.frequency();
      out << YAML::Key << "phase" << YAML::Value << w.phase();
      break;
    case Waveform::Kind::kPolynomial:
      out << YAML::Key << "kind" << YAML::Value << "polynomial";
      out << YAML::Key << "coefficients" << YAML::Value << YAML::Flow << w.coefficients();
      break;
  }
  out << YAML::EndMap;
}

void emit_matrix(YAML::Emitter& out, const Eigen::MatrixXd& m) {
  out << YAML::BeginSeq;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << YAML::Flow << YAML::BeginSeq;
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << m(i, j);
    out << YAML::EndSeq;
  }
  out << YAML::EndSeq;
}

void emit_vector(YAML::Emitter& out, const Eigen::VectorXd& v) {
  out << YAML::Flow << YAML::BeginSeq;
  for (Eigen::Index i = 0; i < v.size(); ++i) out << v(i);
  out << YAML::EndSeq;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream msg;
    msg << source << ":" << e.mark.line + 1 << ":" << e.mark.column + 1
        << ": parse error: " << e.msg;
    throw ConfigError({msg.str()});
  }
  try {
    return build(root);
  } catch (const ConfigError& e) {
    std::vector<std::string> tagged;
    for (const auto& m : e.messages()) tagged.push_back(source + ": " + m);
    throw ConfigError(std::move(tagged));
  }
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path.string() + ": cannot open file"});
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

std::string emit_config(const ScenarioConfig& cfg) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;

  out << YAML::Key << "run" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dimension" << YAML::Value << cfg.run.dimension;
  out << YAML::Key << "step" << YAML::Value << cfg.run.step;
  out << YAML::Key << "t_final" << YAML::Value << cfg.run.t_final;
  out << YAML::EndMap;

  out << YAML::Key << "topologies" << YAML::Value << YAML::BeginSeq;
  for (const auto& t : cfg.topologies) {
    out << YAML::BeginMap;
    out << YAML::Key << "weights" << YAML::Value;
    emit_matrix(out, t.weights());
    out << YAML::Key << "leader_weights" << YAML::Value;
    emit_vector(out, t.leader_weights());
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "schedule" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dwell" << YAML::Value << cfg.schedule.dwell();
  out << YAML::Key << "cycle" << YAML::Value << cfg.schedule.cycles();
  out << YAML::Key << "entries" << YAML::Value << YAML::BeginSeq;
  for (const auto& e : cfg.schedule.entries()) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "topology" << YAML::Value << e.topology
        << YAML::Key << "duration" << YAML::Value << e.duration << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;

  out << YAML::Key << "gains" << YAML::Value << YAML::BeginMap;
  if (cfg.gains.mode == GainSpec::Mode::kExplicit) {
    out << YAML::Key << "mode" << YAML::Value << "explicit";
    out << YAML::Key << "l" << YAML::Value << cfg.gains.l;
    out << YAML::Key << "k" << YAML::Value << cfg.gains.k;
    if (cfg.gains.k0) out << YAML::Key << "k0" << YAML::Value << *cfg.gains.k0;
  } else {
    out << YAML::Key << "mode" << YAML::Value << "synthesize";
    out << YAML::Key << "margin" << YAML::Value << cfg.gains.margin;
  }
  out << YAML::EndMap;

  out << YAML::Key << "leader" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "x0" << YAML::Value;
  emit_vector(out, cfg.leader.x0);
  out << YAML::Key << "v0" << YAML::Value;
  emit_vector(out, cfg.leader.v0);
  out << YAML::Key << "u0" << YAML::Value << YAML::BeginSeq;
  for (const auto& w : cfg.leader.u0) emit_waveform(out, w);
  out << YAML::EndSeq << YAML::EndMap;

  out << YAML::Key << "followers" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "x" << YAML::Value;
  emit_matrix(out, cfg.x);
  out << YAML::Key << "v" << YAML::Value;
  emit_matrix(out, cfg.v);
  out << YAML::Key << "vhat" << YAML::Value;
  emit_matrix(out, cfg.vhat);
  out << YAML::EndMap;

  out << YAML::Key << "noise" << YAML::Value << YAML::BeginMap;
  switch (cfg.noise.mode()) {
    case NoiseModel::Mode::kNone:
      out << YAML::Key << "mode" << YAML::Value << "none";
      break;
    case NoiseModel::Mode::kUniformRandom:
      out << YAML::Key << "mode" << YAML::Value << "random";
      out << YAML::Key << "bound" << YAML::Value << cfg.noise.bound();
      out << YAML::Key << "seed" << YAML::Value << cfg.noise.seed();
      break;
    case NoiseModel::Mode::kWaveform:
      out << YAML::Key << "mode" << YAML::Value << "waveform";
      out << YAML::Key << "bound" << YAML::Value << cfg.noise.bound();
      out << YAML::Key << "position" << YAML::Value << YAML::BeginSeq;
      for (const auto& w : cfg.noise.position()) emit_waveform(out, w);
      out << YAML::EndSeq;
      out << YAML::Key << "velocity" << YAML::Value << YAML::BeginSeq;
      for (const auto& w : cfg.noise.velocity()) emit_waveform(out, w);
      out << YAML::EndSeq;
      break;
  }
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

ScenarioConfig preset_paper_example(bool with_noise) {
  Eigen::MatrixXd a1(4, 4);
  Eigen::MatrixXd a2(4, 4);
  // clang-format off
  a1 << 0, 1, 1, 0,
        1, 0, 0, 1,
        1, 0, 0, 0,
        0, 1, 0, 0;
  a2 << 0, 1, 0, 0,
        1, 0, 0, 0,
        0, 0, 0, 1,
        0, 0, 1, 0;
  // clang-format on
  Eigen::VectorXd b1(4);
  Eigen::VectorXd b2(4);
  b1 << 1, 0, 0, 0;
  b2 << 1, 0, 1, 0;

  LeaderPolicy leader{{Waveform::cosine(1.0, 1.0, 0.0)},
                      Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1)};
  Eigen::MatrixXd x(4, 1);
  x << 1, 2, 3, 4;

  NoiseModel noise = NoiseModel::none();
  if (with_noise) {
    const std::vector<Waveform> sin50(4, Waveform::sine(1.0, 50.0, 0.0));
    noise = NoiseModel::waveforms(sin50, sin50, 1.0);
  }

  return ScenarioConfig{
      {Topology(a1, b1), Topology(a2, b2)},
      SwitchingSchedule({{0, 0.2}, {1, 0.2}}, 0.2, true),
      GainSpec{GainSpec::Mode::kExplicit, 40.0, 200.0, std::nullopt, kDefaultGainMargin},
      leader,
      x,
      Eigen::MatrixXd::Zero(4, 1),
      Eigen::MatrixXd::Zero(4, 1),
      noise,
      RunSpec{1, 1e-3, 20.0},
  };
}

std::vector<SymMatrix> connected_couplings(const ScenarioConfig& cfg,
                                           std::vector<std::size_t>* modes) {
  std::vector<SymMatrix> out;
  for (std::size_t p = 0; p < cfg.topologies.size(); ++p) {
    if (!is_jointly_connected(cfg.topologies[p])) continue;
    out.push_back(coupling_matrix(cfg.topologies[p]));
    if (modes) modes->push_back(p);
  }
  return out;
}

Gains resolve_gains(const ScenarioConfig& cfg) {
  if (cfg.gains.mode == GainSpec::Mode::kExplicit) {
    return cfg.gains.k0 ? Gains(cfg.gains.l, cfg.gains.k, *cfg.gains.k0)
                        : Gains(cfg.gains.l, cfg.gains.k);
  }
  const auto family = connected_couplings(cfg);
  if (family.empty()) throw NotConnected("no jointly connected mode to synthesize gains from");
  return synthesize_gains(spectral_bounds(family), cfg.gains.margin);
}

}  // namespace leadfollow
