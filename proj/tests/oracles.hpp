#pragma once

// Reference computations used only by tests. Nothing here calls into the
// library's numerical kernels.

#include <cmath>
#include <queue>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace oracle {

// Characteristic polynomial coefficients c with det(tI - A) = sum c[i] t^i
// (Faddeev-LeVerrier).
inline std::vector<double> characteristic_polynomial(const Eigen::MatrixXd& a) {
  const auto n = a.rows();
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c[n] = 1.0;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + c[n - k + 1] * eye;
    c[n - k] = -(a * m).trace() / static_cast<double>(k);
  }
  return c;
}

inline double eval_poly(const std::vector<double>& c, double t) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

// Real roots of a polynomial with only simple real roots inside [lo, hi],
// from a sign-change scan followed by bisection.
inline std::vector<double> real_roots(const std::vector<double>& c, double lo, double hi,
                                      int grid = 20000) {
  std::vector<double> roots;
  double prev_t = lo;
  double prev_v = eval_poly(c, lo);
  for (int i = 1; i <= grid; ++i) {
    const double t = lo + (hi - lo) * i / grid;
    const double v = eval_poly(c, t);
    if (prev_v == 0.0) {
      roots.push_back(prev_t);
    } else if ((prev_v < 0) != (v < 0) && v != 0.0) {
      double a = prev_t, b = t, fa = prev_v;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = eval_poly(c, mid);
        if ((fm < 0) == (fa < 0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_t = t;
    prev_v = v;
  }
  return roots;
}

inline double gershgorin_radius(const Eigen::MatrixXd& a) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) r = std::max(r, a.row(i).cwiseAbs().sum());
  return r;
}

inline double cofactor_determinant(const Eigen::MatrixXd& a) {
  const auto n = a.rows();
  if (n == 1) return a(0, 0);
  double det = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::MatrixXd minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r) {
      Eigen::Index cc = 0;
      for (Eigen::Index c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = a(r, c);
      }
    }
    det += ((j % 2) ? -1.0 : 1.0) * a(0, j) * cofactor_determinant(minor);
  }
  return det;
}

// Breadth-first search connectivity: every component of the graph with
// adjacency weights > 0 reaches an agent with b_i > 0.
inline bool bfs_jointly_connected(const Eigen::MatrixXd& w, const Eigen::VectorXd& b) {
  const auto n = w.rows();
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (Eigen::Index s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    bool anchored = false;
    std::queue<Eigen::Index> q;
    q.push(s);
    comp[s] = next;
    while (!q.empty()) {
      const auto u = q.front();
      q.pop();
      anchored = anchored || b(u) > 0.0;
      for (Eigen::Index v = 0; v < n; ++v) {
        if (w(u, v) > 0.0 && comp[v] < 0) {
          comp[v] = next;
          q.push(v);
        }
      }
    }
    if (!anchored) return false;
    ++next;
  }
  return true;
}

inline double quadratic_form(const Eigen::MatrixXd& p, const Eigen::VectorXd& z) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    for (Eigen::Index j = 0; j < z.size(); ++j) acc += z(i) * p(i, j) * z(j);
  }
  return acc;
}

inline Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) m(i, j) = m(j, i) = u(rng);
  }
  return m;
}

struct RandomGraph {
  Eigen::MatrixXd weights;
  Eigen::VectorXd leader;
};

// Random weighted graph with weights in (0, 2] on a random edge subset and
// leader links; jointly connected by construction when `connected` is set.
inline RandomGraph random_graph(std::mt19937_64& rng, int n, bool connected = true) {
  std::uniform_real_distribution<double> weight(0.0, 2.0);
  std::bernoulli_distribution coin(0.4);
  const auto draw = [&] {
    double w = 0.0;
    while (w == 0.0) w = 2.0 - weight(rng);  // (0, 2]
    return w;
  };
  RandomGraph g{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n)};
  for (;;) {
    g.weights.setZero();
    g.leader.setZero();
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (coin(rng)) g.weights(i, j) = g.weights(j, i) = draw();
      }
      if (coin(rng)) g.leader(i) = draw();
    }
    if (!connected || bfs_jointly_connected(g.weights, g.leader)) return g;
  }
}

}  // namespace oracle
