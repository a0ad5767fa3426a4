#include "leadfollow/dynamics.hpp"

#include <cmath>
#include <string>

#include "leadfollow/errors.hpp"

namespace leadfollow {

Eigen::VectorXd LeaderPolicy::input(double t) const {
  Eigen::VectorXd u(dimension());
  for (int d = 0; d < dimension(); ++d) u(d) = u0[static_cast<std::size_t>(d)](t);
  return u;
}

bool SystemState::all_finite() const {
  return std::isfinite(t) && x0.allFinite() && v0.allFinite() && x.allFinite() &&
         v.allFinite() && vhat.allFinite();
}

NoiseModel NoiseModel::none() { return NoiseModel{}; }

NoiseModel NoiseModel::waveforms(std::vector<Waveform> position,
                                 std::vector<Waveform> velocity, double bound) {
  if (position.size() != velocity.size()) {
    throw InvalidInput("noise needs one position and one velocity waveform per agent");
  }
  if (!(bound >= 0.0)) throw InvalidInput("noise bound must be >= 0");
  NoiseModel nm;
  nm.mode_ = Mode::kWaveform;
  nm.bound_ = bound;
  nm.position_ = std::move(position);
  nm.velocity_ = std::move(velocity);
  return nm;
}

NoiseModel NoiseModel::uniform_random(double bound, std::uint64_t seed) {
  if (!(bound >= 0.0)) throw InvalidInput("noise bound must be >= 0");
  NoiseModel nm;
  nm.mode_ = Mode::kUniformRandom;
  nm.bound_ = bound;
  nm.seed_ = seed;
  return nm;
}

NoiseModel NoiseModel::scaled(double s) const {
  NoiseModel nm = *this;
  nm.bound_ *= std::abs(s);
  for (auto& w : nm.position_) w = w.scaled(s);
  for (auto& w : nm.velocity_) w = w.scaled(s);
  return nm;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

double NoiseModel::sample(int agent, int channel, int dim, double t,
                          std::int64_t step_index) const {
  double value = 0.0;
  switch (mode_) {
    case Mode::kNone:
      return 0.0;
    case Mode::kWaveform: {
      const auto& set = channel == 0 ? position_ : velocity_;
      value = set.at(static_cast<std::size_t>(agent))(t);
      break;
    }
    case Mode::kUniformRandom: {
      std::uint64_t key = splitmix64(seed_);
      key = splitmix64(key ^ static_cast<std::uint64_t>(agent));
      key = splitmix64(key ^ static_cast<std::uint64_t>(channel));
      key = splitmix64(key ^ static_cast<std::uint64_t>(dim));
      key = splitmix64(key ^ static_cast<std::uint64_t>(step_index));
      const double u = static_cast<double>(key >> 11) * 0x1.0p-53;
      value = bound_ * (2.0 * u - 1.0);
      break;
    }
  }
  if (!(std::abs(value) <= bound_)) {
    throw InvalidInput("noise sample " + std::to_string(value) + " for agent " +
                       std::to_string(agent) + " exceeds declared bound " +
                       std::to_string(bound_) + " at t=" + std::to_string(t));
  }
  return value;
}

Eigen::VectorXd neighbor_error(int i, const SystemState& s, const Topology& t) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(s.dimension());
  const auto& a = t.weights();
  for (int j : t.neighbors(i)) e += a(i, j) * (s.x.row(i) - s.x.row(j)).transpose();
  if (t.sees_leader(i)) e += t.leader_weights()(i) * (s.x.row(i).transpose() - s.x0);
  return e;
}

Eigen::VectorXd control_input(int i, const SystemState& s, const Topology& t, const Gains& g,
                              const LeaderPolicy& lp) {
  return lp.input(s.t) - g.k() * (s.v.row(i) - s.vhat.row(i)).transpose() -
         g.l() * neighbor_error(i, s, t);
}

Eigen::VectorXd observer_rate(int i, const SystemState& s, const Topology& t, const Gains& g,
                              const LeaderPolicy& lp) {
  return lp.input(s.t) - g.k0() * neighbor_error(i, s, t);
}

SystemState state_derivative(const SystemState& s, const Topology& t, const Gains& g,
                             const LeaderPolicy& lp, const NoiseModel& nm,
                             std::int64_t step_index) {
  const int n = s.agents();
  const int m = s.dimension();
  const Eigen::VectorXd u0 = lp.input(s.t);
  SystemState d;
  d.t = s.t;
  d.x0 = s.v0;
  d.v0 = u0;
  d.x = s.v;
  d.v.resize(n, m);
  d.vhat.resize(n, m);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd e = neighbor_error(i, s, t);
    d.v.row(i) = (u0 - g.k() * (s.v.row(i) - s.vhat.row(i)).transpose() - g.l() * e).transpose();
    d.vhat.row(i) = (u0 - g.k0() * e).transpose();
  }
  if (nm.mode() != NoiseModel::Mode::kNone) {
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < m; ++c) {
        d.x(i, c) += nm.sample(i, 0, c, s.t, step_index);
        d.v(i, c) += nm.sample(i, 1, c, s.t, step_index);
      }
    }
  }
  return d;
}

namespace {

// state + h * rate, field by field.
SystemState advance(const SystemState& s, const SystemState& rate, double h) {
  SystemState out;
  out.t = s.t + h;
  out.x0 = s.x0 + h * rate.x0;
  out.v0 = s.v0 + h * rate.v0;
  out.x = s.x + h * rate.x;
  out.v = s.v + h * rate.v;
  out.vhat = s.vhat + h * rate.vhat;
  return out;
}

std::int64_t step_count(double h, double t_final) {
  if (!(h > 0.0)) throw InvalidInput("step h must be > 0");
  if (!(t_final > 0.0)) throw InvalidInput("t_final must be > 0");
  const auto steps = std::llround(t_final / h);
  if (steps < 1 || std::abs(static_cast<double>(steps) * h - t_final) > 1e-9 * t_final) {
    throw InvalidInput("t_final must be an integer multiple of the step h");
  }
  return steps;
}

void check_step_resolves_switches(double h, const SwitchingSchedule& sched) {
  if (h > sched.dwell() / 4.0) {
    throw InvalidInput("step h=" + std::to_string(h) + " exceeds dwell/4=" +
                       std::to_string(sched.dwell() / 4.0) + "; switch instants unresolved");
  }
}

// Walks the uniform grid, splitting each grid step at switch instants.
// advance_fn(t_start, dt, topology_index, step_index) integrates one sub-step;
// record_fn(sample_index, t) runs after each full grid step.
template <class AdvanceFn, class RecordFn>
void march(const SwitchingSchedule& sched, double h, std::int64_t steps,
           AdvanceFn&& advance_fn, RecordFn&& record_fn) {
  const double snap = 1e-9 * h;
  for (std::int64_t j = 0; j < steps; ++j) {
    const double ta = static_cast<double>(j) * h;
    const double tb = static_cast<double>(j + 1) * h;
    auto cuts = sched.switch_times_between(ta + snap, tb - snap);
    cuts.push_back(tb);
    double t = ta;
    for (double c : cuts) {
      advance_fn(t, c - t, sched.topology_at(0.5 * (t + c)), j);
      t = c;
    }
    record_fn(j + 1, tb);
  }
}

void record_sample(Trajectory& traj, const SystemState& s) {
  const int n = s.agents();
  Eigen::VectorXd ex(n);
  Eigen::VectorXd ev(n);
  for (int i = 0; i < n; ++i) {
    ex(i) = (s.x.row(i).transpose() - s.x0).norm();
    ev(i) = (s.v.row(i).transpose() - s.v0).norm();
  }
  traj.samples.push_back(s);
  traj.err_x.push_back(std::move(ex));
  traj.err_v.push_back(std::move(ev));
}

void check_family(std::span<const Topology> family, const SwitchingSchedule& sched, int n) {
  if (family.empty()) throw InvalidInput("topology family is empty");
  sched.check_indices(family.size());
  for (std::size_t p = 0; p < family.size(); ++p) {
    if (family[p].agents() != n) {
      throw InvalidInput("topology " + std::to_string(p) + " has " +
                         std::to_string(family[p].agents()) + " agents, state has " +
                         std::to_string(n));
    }
  }
}

void check_noise_agents(const NoiseModel& nm, int n) {
  if (nm.mode() == NoiseModel::Mode::kWaveform &&
      nm.position().size() != static_cast<std::size_t>(n)) {
    throw InvalidInput("noise model declares " + std::to_string(nm.position().size()) +
                       " agents, system has " + std::to_string(n));
  }
}

}  // namespace

SystemState step(const SystemState& s, double h, const Topology& t, const Gains& g,
                 const LeaderPolicy& lp, const NoiseModel& nm, std::int64_t step_index) {
  if (!(h > 0.0)) throw InvalidInput("step h must be > 0");
  const SystemState k1 = state_derivative(s, t, g, lp, nm, step_index);
  const SystemState k2 = state_derivative(advance(s, k1, 0.5 * h), t, g, lp, nm, step_index);
  const SystemState k3 = state_derivative(advance(s, k2, 0.5 * h), t, g, lp, nm, step_index);
  const SystemState k4 = state_derivative(advance(s, k3, h), t, g, lp, nm, step_index);
  SystemState out;
  out.t = s.t + h;
  const double w = h / 6.0;
  out.x0 = s.x0 + w * (k1.x0 + 2.0 * k2.x0 + 2.0 * k3.x0 + k4.x0);
  out.v0 = s.v0 + w * (k1.v0 + 2.0 * k2.v0 + 2.0 * k3.v0 + k4.v0);
  out.x = s.x + w * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
  out.v = s.v + w * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
  out.vhat = s.vhat + w * (k1.vhat + 2.0 * k2.vhat + 2.0 * k3.vhat + k4.vhat);
  if (!out.all_finite()) throw Diverged(out.t);
  return out;
}

Trajectory simulate(const SystemState& initial, const SwitchingSchedule& sched,
                    std::span<const Topology> family, const Gains& g, const LeaderPolicy& lp,
                    const NoiseModel& nm, double h, double t_final) {
  const auto steps = step_count(h, t_final);
  check_step_resolves_switches(h, sched);
  check_family(family, sched, initial.agents());
  check_noise_agents(nm, initial.agents());
  if (lp.dimension() != initial.dimension()) {
    throw InvalidInput("leader input dimension does not match state dimension");
  }
  if (!initial.all_finite()) throw Diverged(initial.t);

  Trajectory traj;
  traj.step = h;
  traj.samples.reserve(static_cast<std::size_t>(steps) + 1);
  SystemState s = initial;
  s.t = 0.0;
  record_sample(traj, s);
  march(
      sched, h, steps,
      [&](double t0, double dt, std::size_t mode, std::int64_t j) {
        s.t = t0;
        s = step(s, dt, family[mode], g, lp, nm, j);
      },
      [&](std::int64_t, double t) {
        s.t = t;
        record_sample(traj, s);
      });
  return traj;
}

SystemState initial_state(const LeaderPolicy& lp, Eigen::MatrixXd x, Eigen::MatrixXd v,
                          std::optional<Eigen::MatrixXd> vhat) {
  SystemState s;
  s.t = 0.0;
  s.x0 = lp.x0;
  s.v0 = lp.v0;
  s.vhat = vhat ? std::move(*vhat) : Eigen::MatrixXd::Zero(x.rows(), x.cols());
  s.x = std::move(x);
  s.v = std::move(v);
  if (s.x0.size() != s.x.cols() || s.v0.size() != s.x.cols() || s.v.rows() != s.x.rows() ||
      s.v.cols() != s.x.cols() || s.vhat.rows() != s.x.rows() || s.vhat.cols() != s.x.cols()) {
    throw InvalidInput("initial state blocks have inconsistent shapes");
  }
  return s;
}

Eigen::VectorXd error_coordinates(const SystemState& s, const Gains& g) {
  const int n = s.agents();
  const int m = s.dimension();
  Eigen::VectorXd z(3 * n * m);
  for (int d = 0; d < m; ++d) {
    const Eigen::Index base = 3 * n * d;
    z.segment(base, n) = s.x.col(d).array() - s.x0(d);
    z.segment(base + n, n) = s.v.col(d).array() - s.v0(d);
    z.segment(base + 2 * n, n) = g.k() * (s.vhat.col(d).array() - s.v0(d));
  }
  return z;
}

SystemState state_from_error_coordinates(const Eigen::VectorXd& z, double t,
                                         const Eigen::VectorXd& x0, const Eigen::VectorXd& v0,
                                         const Gains& g) {
  const auto m = x0.size();
  if (m == 0 || v0.size() != m || z.size() % (3 * m) != 0) {
    throw InvalidInput("error vector length is not 3 n m");
  }
  const auto n = z.size() / (3 * m);
  SystemState s;
  s.t = t;
  s.x0 = x0;
  s.v0 = v0;
  s.x.resize(n, m);
  s.v.resize(n, m);
  s.vhat.resize(n, m);
  for (Eigen::Index d = 0; d < m; ++d) {
    const Eigen::Index base = 3 * n * d;
    s.x.col(d) = z.segment(base, n).array() + x0(d);
    s.v.col(d) = z.segment(base + n, n).array() + v0(d);
    s.vhat.col(d) = z.segment(base + 2 * n, n).array() / g.k() + v0(d);
  }
  return s;
}

Eigen::MatrixXd error_system_matrix(const SymMatrix& coupling, const Gains& g) {
  if (!g.default_observer_gain()) {
    throw InvalidInput(
        "the compact error system is only valid for the default observer gain k0 = l/k^2");
  }
  const int n = coupling.order();
  const auto& h = coupling.matrix();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(3 * n, 3 * n);
  f.block(0, n, n, n) = eye;
  f.block(n, 0, n, n) = -g.l() * h;
  f.block(n, n, n, n) = -g.k() * eye;
  f.block(n, 2 * n, n, n) = eye;
  f.block(2 * n, 0, n, n) = -(g.l() / g.k()) * h;
  return f;
}

Eigen::MatrixXd error_system_matrix(const Topology& t, const Gains& g) {
  return error_system_matrix(coupling_matrix(t), g);
}

ErrorTrajectory simulate_error_system(const Eigen::VectorXd& z0, const SwitchingSchedule& sched,
                                      std::span<const Topology> family, const Gains& g,
                                      const NoiseModel& nm, double h, double t_final) {
  const auto steps = step_count(h, t_final);
  check_step_resolves_switches(h, sched);
  if (family.empty()) throw InvalidInput("topology family is empty");
  const int n = family.front().agents();
  check_family(family, sched, n);
  check_noise_agents(nm, n);
  if (z0.size() == 0 || z0.size() % (3 * n) != 0) {
    throw InvalidInput("error vector length is not a multiple of 3n");
  }
  const int m = static_cast<int>(z0.size() / (3 * n));

  std::vector<Eigen::MatrixXd> fs;
  fs.reserve(family.size());
  for (const auto& topo : family) fs.push_back(error_system_matrix(topo, g));

  const auto rhs = [&](double t, const Eigen::VectorXd& z, const Eigen::MatrixXd& f,
                       std::int64_t j) {
    Eigen::VectorXd dz(z.size());
    for (int d = 0; d < m; ++d) {
      const Eigen::Index base = 3 * n * d;
      dz.segment(base, 3 * n) = f * z.segment(base, 3 * n);
      if (nm.mode() != NoiseModel::Mode::kNone) {
        for (int i = 0; i < n; ++i) {
          dz(base + i) += nm.sample(i, 0, d, t, j);
          dz(base + n + i) += nm.sample(i, 1, d, t, j);
        }
      }
    }
    return dz;
  };

  ErrorTrajectory traj;
  traj.step = h;
  traj.agents = n;
  traj.dimension = m;
  traj.t.reserve(static_cast<std::size_t>(steps) + 1);
  traj.z.reserve(static_cast<std::size_t>(steps) + 1);
  Eigen::VectorXd z = z0;
  traj.t.push_back(0.0);
  traj.z.push_back(z);
  march(
      sched, h, steps,
      [&](double t0, double dt, std::size_t mode, std::int64_t j) {
        const auto& f = fs[mode];
        const Eigen::VectorXd k1 = rhs(t0, z, f, j);
        const Eigen::VectorXd k2 = rhs(t0 + 0.5 * dt, z + 0.5 * dt * k1, f, j);
        const Eigen::VectorXd k3 = rhs(t0 + 0.5 * dt, z + 0.5 * dt * k2, f, j);
        const Eigen::VectorXd k4 = rhs(t0 + dt, z + dt * k3, f, j);
        z += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!z.allFinite()) throw Diverged(t0 + dt);
      },
      [&](std::int64_t, double t) {
        traj.t.push_back(t);
        traj.z.push_back(z);
      });
  return traj;
}

}  // namespace leadfollow
