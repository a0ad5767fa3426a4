#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "leadfollow/gain_synthesis.hpp"
#include "leadfollow/graph_topology.hpp"
#include "leadfollow/waveform.hpp"

namespace leadfollow {

// Leader acceleration u0(t) (one waveform per coordinate) and initial state.
struct LeaderPolicy {
  std::vector<Waveform> u0;
  Eigen::VectorXd x0;
  Eigen::VectorXd v0;

  int dimension() const { return static_cast<int>(u0.size()); }
  Eigen::VectorXd input(double t) const;

  bool operator==(const LeaderPolicy& o) const {
    return u0 == o.u0 && x0 == o.x0 && v0 == o.v0;
  }
};

// Leader and follower state at time t. Follower quantities are n x m.
struct SystemState {
  double t = 0.0;
  Eigen::VectorXd x0;
  Eigen::VectorXd v0;
  Eigen::MatrixXd x;
  Eigen::MatrixXd v;
  Eigen::MatrixXd vhat;

  int agents() const { return static_cast<int>(x.rows()); }
  int dimension() const { return static_cast<int>(x.cols()); }
  bool all_finite() const;
};

// Follower disturbances: channel 0 enters the position rate, channel 1 the
// acceleration. Every evaluated sample is checked against bound().
class NoiseModel {
 public:
  enum class Mode { kNone, kWaveform, kUniformRandom };

  static NoiseModel none();
  // One waveform per agent and channel; applied identically on every coordinate.
  static NoiseModel waveforms(std::vector<Waveform> position, std::vector<Waveform> velocity,
                              double bound);
  // Uniform in [-bound, bound], held constant over each integration step.
  static NoiseModel uniform_random(double bound, std::uint64_t seed);

  Mode mode() const { return mode_; }
  double bound() const { return bound_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<Waveform>& position() const { return position_; }
  const std::vector<Waveform>& velocity() const { return velocity_; }

  // Same model with every waveform amplitude and the bound multiplied by s.
  NoiseModel scaled(double s) const;

  // delta_i^channel on coordinate dim. step_index selects the held random value.
  double sample(int agent, int channel, int dim, double t, std::int64_t step_index) const;

  bool operator==(const NoiseModel&) const = default;

 private:
  Mode mode_ = Mode::kNone;
  double bound_ = 0.0;
  std::uint64_t seed_ = 0;
  std::vector<Waveform> position_;
  std::vector<Waveform> velocity_;
};

struct Trajectory {
  double step = 0.0;
  std::vector<SystemState> samples;
  std::vector<Eigen::VectorXd> err_x;  // |x_i - x0| per agent
  std::vector<Eigen::VectorXd> err_v;  // |v_i - v0| per agent
  std::optional<std::vector<double>> lyapunov;  // V(z) per sample once a certificate is attached

  std::size_t size() const { return samples.size(); }
  double max_position_error(std::size_t sample) const { return err_x[sample].maxCoeff(); }
  double max_velocity_error(std::size_t sample) const { return err_v[sample].maxCoeff(); }
};

// Consensus term sum_j a_ij (x_i - x_j) + b_i (x_i - x0) for agent i.
Eigen::VectorXd neighbor_error(int i, const SystemState& s, const Topology& t);

// u_i = u0 - k (v_i - vhat_i) - l * neighbor_error_i
Eigen::VectorXd control_input(int i, const SystemState& s, const Topology& t, const Gains& g,
                              const LeaderPolicy& lp);

// d/dt vhat_i = u0 - k0 * neighbor_error_i
Eigen::VectorXd observer_rate(int i, const SystemState& s, const Topology& t, const Gains& g,
                              const LeaderPolicy& lp);

// Right-hand side of the coupled leader / follower / observer system, returned
// as a state whose fields hold time derivatives (t is left at s.t).
SystemState state_derivative(const SystemState& s, const Topology& t, const Gains& g,
                             const LeaderPolicy& lp, const NoiseModel& nm,
                             std::int64_t step_index = 0);

// One classical RK4 step of length h on a fixed topology.
SystemState step(const SystemState& s, double h, const Topology& t, const Gains& g,
                 const LeaderPolicy& lp, const NoiseModel& nm, std::int64_t step_index = 0);

// Fixed-step integration over a switching schedule. Steps are split so that no
// sub-step straddles a switch instant; one sample is recorded every h.
Trajectory simulate(const SystemState& initial, const SwitchingSchedule& sched,
                    std::span<const Topology> family, const Gains& g, const LeaderPolicy& lp,
                    const NoiseModel& nm, double h, double t_final);

// Initial state with leader from lp, followers at x, v, vhat (vhat defaults to 0).
SystemState initial_state(const LeaderPolicy& lp, Eigen::MatrixXd x, Eigen::MatrixXd v,
                          std::optional<Eigen::MatrixXd> vhat = std::nullopt);

// z = (xi; eta; zeta) per coordinate, xi = x - x0 1, eta = v - v0 1,
// zeta = k (vhat - v0 1). Layout: coordinate d occupies [3 n d, 3 n (d + 1)).
Eigen::VectorXd error_coordinates(const SystemState& s, const Gains& g);

// Inverse of error_coordinates for a given leader state.
SystemState state_from_error_coordinates(const Eigen::VectorXd& z, double t,
                                         const Eigen::VectorXd& x0, const Eigen::VectorXd& v0,
                                         const Gains& g);

// F = [[0, I, 0], [-l H, -k I, I], [-(l/k) H, 0, 0]]. Only valid for k0 = l / k^2.
Eigen::MatrixXd error_system_matrix(const Topology& t, const Gains& g);
Eigen::MatrixXd error_system_matrix(const SymMatrix& coupling, const Gains& g);

struct ErrorTrajectory {
  double step = 0.0;
  int agents = 0;
  int dimension = 0;
  std::vector<double> t;
  std::vector<Eigen::VectorXd> z;
};

// z' = F_sigma z + (delta_1; delta_2; 0), integrated with the same RK4 and
// switch alignment as simulate.
ErrorTrajectory simulate_error_system(const Eigen::VectorXd& z0, const SwitchingSchedule& sched,
                                      std::span<const Topology> family, const Gains& g,
                                      const NoiseModel& nm, double h, double t_final);

}  // namespace leadfollow
