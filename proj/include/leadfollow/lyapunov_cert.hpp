#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "leadfollow/dynamics.hpp"
#include "leadfollow/gain_synthesis.hpp"
#include "leadfollow/graph_topology.hpp"
#include "leadfollow/spectral.hpp"

namespace leadfollow {

// P = [[k I, I, -(k/2) I], [I, I, -(1/2) I], [-(k/2) I, -(1/2) I, (k/2) I]]
SymMatrix build_P(const Gains& g, int agents);

// Q_p = -(F_p^T P + P F_p) written out block by block. Requires k0 = l/k^2.
SymMatrix build_Q(const Topology& t, const Gains& g);

// Sufficient condition for Q_p > 0 (both blocks 2n x 2n). Throws NotConnected
// when H is singular.
SymMatrix build_K(const Topology& t, const Gains& g);

struct CertificateCheck {
  std::string name;
  bool pass;
  double value;  // the quantity compared (min eigenvalue, residual...)
};

struct ModeCertificate {
  std::size_t index;
  SymMatrix Q;
  double q_min_eig;
  double identity_residual;  // max |Q + F^T P + P F|
  bool k_positive_definite;
};

struct LyapunovCertificate {
  Gains gains;
  int agents;
  SymMatrix P;
  double p_min_eig;
  double p_max_eig;
  std::vector<ModeCertificate> modes;      // jointly connected modes
  std::vector<std::size_t> excluded_modes;  // the rest
  double beta;                              // V' <= -2 beta V on connected modes
  std::vector<CertificateCheck> checks;
  bool valid;
};

inline constexpr double kIdentityTolerance = 1e-10;

// Throws NotConnected if no mode is jointly connected and InternalConsistency
// if Q_p differs from -(F^T P + P F) by more than kIdentityTolerance.
// Non-default observer gains yield an invalid certificate.
LyapunovCertificate certify(std::span<const Topology> family, const Gains& g);

// V(z) = sum over coordinates of z_d^T P z_d.
double evaluate_V(const LyapunovCertificate& cert, const Eigen::VectorXd& z);

// Fills traj.lyapunov from the samples' error coordinates.
void attach_lyapunov(Trajectory& traj, const LyapunovCertificate& cert);

inline constexpr double kDecaySlack = 1e-6;

struct DecayReport {
  bool pass = true;
  std::size_t samples = 0;
  std::size_t failures = 0;
  double worst_ratio = 0.0;  // max V(t) / (V(0) e^{-2 beta t})
  double worst_time = 0.0;
  double first_failure_time = -1.0;
};

// Checks V(z(t)) <= V(z(0)) e^{-2 beta t} (1 + kDecaySlack) at every sample.
DecayReport decay_check(const Trajectory& traj, const LyapunovCertificate& cert);
DecayReport decay_check(const ErrorTrajectory& traj, const LyapunovCertificate& cert);

struct NoisyBoundAnalysis {
  double alpha = 0.0;   // growth rate on disconnected intervals
  double alpha0 = 0.0;  // disturbance injection, disconnected intervals
  double beta0 = 0.0;   // disturbance injection, connected intervals
  double beta = 0.0;
  double window = 0.0;  // T
  double t_d = 0.0;     // max disconnected time per window
  double epsilon = 0.0;
  double subinterval_factor = 1.0;
  std::optional<int> subintervals;
  double g_bar = 0.0;
  double delta = 0.0;
  double v_ultimate = 0.0;
  double c_delta = 0.0;
  bool contractive = false;
  std::vector<std::size_t> disconnected_modes;
  std::string message;
};

// Ultimate-bound analysis under |delta_i^j| <= delta over windows of length T.
// When subintervals is given, g_bar is multiplied by
// (e^{(s+1) t_d} - 1) / (e^{t_d} - 1); by default that factor is 1.
// epsilon >= 1 is reported through contractive = false with infinite bounds.
NoisyBoundAnalysis noisy_bound(const LyapunovCertificate& cert,
                               std::span<const Topology> family,
                               const SwitchingSchedule& sched, double window, double delta,
                               int dimension = 1, std::optional<int> subintervals = std::nullopt);

// Largest total time in any window [jT, (j+1)T) spent on a mode in `disconnected`.
double max_disconnected_time(const SwitchingSchedule& sched, double window,
                             std::span<const std::size_t> disconnected);

}  // namespace leadfollow
