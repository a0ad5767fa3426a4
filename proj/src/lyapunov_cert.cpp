#include "leadfollow/lyapunov_cert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>

#include "leadfollow/errors.hpp"

namespace leadfollow {

namespace {

Eigen::MatrixXd identity(int n) { return Eigen::MatrixXd::Identity(n, n); }

// F^T P + P F, exactly symmetric.
Eigen::MatrixXd lyapunov_derivative(const Eigen::MatrixXd& f, const SymMatrix& p) {
  const Eigen::MatrixXd pf = p.matrix() * f;
  return pf + pf.transpose();
}

}  // namespace

SymMatrix build_P(const Gains& g, int agents) {
  if (agents < 1) throw InvalidInput("build_P needs at least one agent");
  const int n = agents;
  const double k = g.k();
  const Eigen::MatrixXd eye = identity(n);
  Eigen::MatrixXd p(3 * n, 3 * n);
  // clang-format off
  p << k * eye,         eye,         -(k / 2) * eye,
       eye,             eye,         -0.5 * eye,
       -(k / 2) * eye,  -0.5 * eye,  (k / 2) * eye;
  // clang-format on
  return SymMatrix(std::move(p));
}

SymMatrix build_Q(const Topology& t, const Gains& g) {
  if (!g.default_observer_gain()) {
    throw InvalidInput("Q_p is only defined for the default observer gain k0 = l/k^2");
  }
  const int n = t.agents();
  const Eigen::MatrixXd h = coupling_matrix(t).matrix();
  const double l = g.l();
  const double k = g.k();
  const Eigen::MatrixXd eye = identity(n);
  const Eigen::MatrixXd cross = l * h - (l / (2 * k)) * h;
  Eigen::MatrixXd q(3 * n, 3 * n);
  // clang-format off
  q << 2 * l * h - l * h,  cross,               -eye,
       cross,              2 * (k - 1) * eye,   -eye,
       -eye,               -eye,                eye;
  // clang-format on
  return SymMatrix(std::move(q));
}

SymMatrix build_K(const Topology& t, const Gains& g) {
  const int n = t.agents();
  const Eigen::MatrixXd h = coupling_matrix(t).matrix();
  Eigen::LLT<Eigen::MatrixXd> llt(h);
  if (llt.info() != Eigen::Success || !is_positive_definite(SymMatrix(h))) {
    throw NotConnected("K_p needs H_p^{-1}, but H_p is singular (mode not jointly connected)");
  }
  Eigen::MatrixXd h_inv = llt.solve(identity(n));
  h_inv = 0.5 * (h_inv + h_inv.transpose()).eval();

  const double l = g.l();
  const double k = g.k();
  const double a = 2.0 - 1.0 / k;
  const Eigen::MatrixXd eye = identity(n);
  Eigen::MatrixXd kp(2 * n, 2 * n);
  // clang-format off
  kp << 2 * (k - 1) * eye - (a * a / 4) * l * h,  -((4 - 1 / k) / 2) * eye,
        -((4 - 1 / k) / 2) * eye,                 eye - (1 / l) * h_inv;
  // clang-format on
  return SymMatrix(std::move(kp));
}

LyapunovCertificate certify(std::span<const Topology> family, const Gains& g) {
  if (family.empty()) throw InvalidInput("certify needs a non-empty topology family");
  const int n = family.front().agents();
  for (const auto& t : family) {
    if (t.agents() != n) throw InvalidInput("topology family mixes agent counts");
  }

  LyapunovCertificate cert{
      g, n, build_P(g, n), 0.0, 0.0, {}, {}, 0.0, {}, false,
  };
  const auto p_eig = eigenvalues_sym(cert.P);
  cert.p_min_eig = p_eig.front();
  cert.p_max_eig = p_eig.back();
  cert.checks.push_back({"P positive definite", cert.p_min_eig > kPdTolerance, cert.p_min_eig});

  for (std::size_t p = 0; p < family.size(); ++p) {
    if (!is_jointly_connected(family[p])) cert.excluded_modes.push_back(p);
  }
  if (cert.excluded_modes.size() == family.size()) {
    throw NotConnected("no mode in the family is jointly connected");
  }

  const bool default_gain = g.default_observer_gain();
  cert.checks.push_back({"observer gain k0 = l/k^2", default_gain, g.k0()});
  if (!default_gain) {
    // Non-default observer gain: the quadratic certificate does not apply.
    cert.valid = false;
    return cert;
  }

  double q_min = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < family.size(); ++p) {
    if (std::find(cert.excluded_modes.begin(), cert.excluded_modes.end(), p) !=
        cert.excluded_modes.end()) {
      continue;
    }
    SymMatrix q = build_Q(family[p], g);
    const Eigen::MatrixXd s = lyapunov_derivative(error_system_matrix(family[p], g), cert.P);
    const double residual = (q.matrix() + s).cwiseAbs().maxCoeff();
    if (!(residual <= kIdentityTolerance)) {
      std::ostringstream msg;
      msg << "mode " << p << ": Q_p + F^T P + P F has max entry " << residual;
      throw InternalConsistency(msg.str());
    }
    const double qe = min_eigenvalue(q);
    bool k_pd = false;
    try {
      k_pd = is_positive_definite(build_K(family[p], g));
    } catch (const NotConnected&) {
      k_pd = false;
    }
    const std::string tag = "mode " + std::to_string(p);
    cert.checks.push_back({tag + " Q_p positive definite", qe > kPdTolerance, qe});
    cert.checks.push_back({tag + " identity Q_p = -(F^T P + P F)", true, residual});
    cert.checks.push_back({tag + " K_p positive definite (sufficient)", k_pd,
                           k_pd ? 1.0 : 0.0});
    q_min = std::min(q_min, qe);
    cert.modes.push_back({p, std::move(q), qe, residual, k_pd});
  }

  cert.beta = q_min / (2.0 * cert.p_max_eig);
  cert.valid = cert.p_min_eig > kPdTolerance && cert.beta > 0.0 &&
               std::all_of(cert.modes.begin(), cert.modes.end(),
                           [](const ModeCertificate& m) { return m.q_min_eig > kPdTolerance; });
  return cert;
}

double evaluate_V(const LyapunovCertificate& cert, const Eigen::VectorXd& z) {
  const Eigen::Index block = 3 * cert.agents;
  if (z.size() == 0 || z.size() % block != 0) {
    throw InvalidInput("error vector length " + std::to_string(z.size()) +
                       " is not a multiple of 3n=" + std::to_string(block));
  }
  double v = 0.0;
  for (Eigen::Index base = 0; base < z.size(); base += block) {
    const auto zd = z.segment(base, block);
    v += zd.dot(cert.P.matrix() * zd);
  }
  return v;
}

void attach_lyapunov(Trajectory& traj, const LyapunovCertificate& cert) {
  std::vector<double> values;
  values.reserve(traj.size());
  for (const auto& s : traj.samples) values.push_back(evaluate_V(cert, error_coordinates(s, cert.gains)));
  traj.lyapunov = std::move(values);
}

namespace {

template <class ZAt>
DecayReport decay_over(std::size_t count, ZAt&& z_at, const LyapunovCertificate& cert) {
  if (!cert.valid) throw InvalidInput("decay_check needs a valid certificate");
  if (!cert.excluded_modes.empty()) {
    throw InvalidInput("decay_check needs every mode of the family jointly connected");
  }
  DecayReport r;
  r.samples = count;
  if (count == 0) return r;
  const auto [t_start, z_start] = z_at(0);
  const double v0 = evaluate_V(cert, z_start);
  for (std::size_t s = 0; s < count; ++s) {
    const auto [t, z] = z_at(s);
    const double v = evaluate_V(cert, z);
    const double envelope = v0 * std::exp(-2.0 * cert.beta * (t - t_start));
    const double ratio = envelope > 0.0 ? v / envelope : (v > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    if (ratio > r.worst_ratio) {
      r.worst_ratio = ratio;
      r.worst_time = t;
    }
    if (!(v <= envelope * (1.0 + kDecaySlack))) {
      if (r.failures == 0) r.first_failure_time = t;
      ++r.failures;
    }
  }
  r.pass = r.failures == 0;
  return r;
}

}  // namespace

DecayReport decay_check(const Trajectory& traj, const LyapunovCertificate& cert) {
  return decay_over(
      traj.size(),
      [&](std::size_t s) {
        return std::pair{traj.samples[s].t, error_coordinates(traj.samples[s], cert.gains)};
      },
      cert);
}

DecayReport decay_check(const ErrorTrajectory& traj, const LyapunovCertificate& cert) {
  return decay_over(
      traj.z.size(), [&](std::size_t s) { return std::pair{traj.t[s], traj.z[s]}; }, cert);
}

double max_disconnected_time(const SwitchingSchedule& sched, double window,
                             std::span<const std::size_t> disconnected) {
  if (!(window > 0.0)) throw InvalidInput("window length T must be > 0");
  std::size_t windows;
  if (sched.cycles()) {
    const double horizon = 100.0 * std::max(sched.total_duration(), window);
    windows = std::min<std::size_t>(200000, static_cast<std::size_t>(std::ceil(horizon / window)));
  } else {
    windows = static_cast<std::size_t>(std::floor(sched.total_duration() / window + 1e-9));
    if (windows == 0) throw InvalidInput("window T is longer than the non-cycling schedule");
  }
  const auto is_disconnected = [&](std::size_t mode) {
    return std::find(disconnected.begin(), disconnected.end(), mode) != disconnected.end();
  };
  double worst = 0.0;
  for (std::size_t j = 0; j < windows; ++j) {
    const double a = static_cast<double>(j) * window;
    const double b = static_cast<double>(j + 1) * window;
    auto cuts = sched.switch_times_between(a, b);
    cuts.push_back(b);
    double t = a;
    double total = 0.0;
    for (double c : cuts) {
      if (is_disconnected(sched.topology_at(0.5 * (t + c)))) total += c - t;
      t = c;
    }
    worst = std::max(worst, total);
  }
  return worst;
}

NoisyBoundAnalysis noisy_bound(const LyapunovCertificate& cert,
                               std::span<const Topology> family,
                               const SwitchingSchedule& sched, double window, double delta,
                               int dimension, std::optional<int> subintervals) {
  if (!cert.valid) throw InvalidInput("noisy_bound needs a valid certificate");
  if (!(delta >= 0.0)) throw InvalidInput("disturbance bound must be >= 0");
  if (dimension < 1) throw InvalidInput("dimension must be >= 1");
  if (subintervals && *subintervals < 1) throw InvalidInput("subinterval count must be >= 1");
  sched.check_indices(family.size());

  NoisyBoundAnalysis r;
  r.beta = cert.beta;
  r.window = window;
  r.delta = delta;
  r.subintervals = subintervals;

  for (const auto& e : sched.entries()) {
    if (std::find(cert.excluded_modes.begin(), cert.excluded_modes.end(), e.topology) !=
            cert.excluded_modes.end() &&
        std::find(r.disconnected_modes.begin(), r.disconnected_modes.end(), e.topology) ==
            r.disconnected_modes.end()) {
      r.disconnected_modes.push_back(e.topology);
    }
  }
  std::sort(r.disconnected_modes.begin(), r.disconnected_modes.end());

  for (std::size_t p : r.disconnected_modes) {
    const Eigen::MatrixXd s = lyapunov_derivative(error_system_matrix(family[p], cert.gains), cert.P);
    r.alpha = std::max(r.alpha, max_eigenvalue(SymMatrix(s)) / cert.p_min_eig);
  }

  const double n = static_cast<double>(cert.agents);
  r.alpha0 = 2.0 * n * dimension * cert.p_max_eig * cert.p_max_eig / (cert.beta * cert.p_min_eig);
  r.beta0 = r.alpha0;
  r.t_d = max_disconnected_time(sched, window, r.disconnected_modes);
  r.epsilon = std::exp(-cert.beta * (window - r.t_d) + r.alpha * r.t_d);

  const double growth_injection =
      r.alpha > 0.0 ? (r.alpha0 / r.alpha) * std::expm1(r.alpha * r.t_d) : r.alpha0 * r.t_d;
  if (subintervals) {
    const double s = static_cast<double>(*subintervals);
    r.subinterval_factor =
        r.t_d > 0.0 ? std::expm1((s + 1.0) * r.t_d) / std::expm1(r.t_d) : s + 1.0;
  }
  r.g_bar = r.subinterval_factor * std::max(r.beta0, growth_injection);

  r.contractive = r.epsilon < 1.0;
  if (r.contractive) {
    const double per_unit = std::sqrt(r.g_bar / ((1.0 - r.epsilon) * cert.p_min_eig));
    r.c_delta = delta * per_unit;
    r.v_ultimate = r.g_bar * delta * delta / (1.0 - r.epsilon);
    r.message = "contractive";
  } else {
    r.c_delta = std::numeric_limits<double>::infinity();
    r.v_ultimate = std::numeric_limits<double>::infinity();
    r.message = "not contractive: connected fraction too small";
  }
  return r;
}

}  // namespace leadfollow
