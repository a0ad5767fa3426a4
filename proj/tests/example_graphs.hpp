#pragma once

#include <Eigen/Core>

#include "leadfollow/graph_topology.hpp"

namespace example {

// Follower graphs G1 (edges 1-2, 1-3, 2-4) and G2 (edges 1-2, 3-4), unit weights.
inline Eigen::MatrixXd g1() {
  Eigen::MatrixXd a(4, 4);
  a << 0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0;
  return a;
}

inline Eigen::MatrixXd g2() {
  Eigen::MatrixXd a(4, 4);
  a << 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0;
  return a;
}

inline Eigen::VectorXd b1() { return Eigen::Vector4d(1, 0, 0, 0); }
inline Eigen::VectorXd b2() { return Eigen::Vector4d(1, 0, 1, 0); }

inline leadfollow::Topology mode1() { return {g1(), b1()}; }
inline leadfollow::Topology mode2() { return {g2(), b2()}; }

inline Eigen::MatrixXd h1() {
  Eigen::MatrixXd h(4, 4);
  h << 3, -1, -1, 0, -1, 2, 0, -1, -1, 0, 1, 0, 0, -1, 0, 1;
  return h;
}

inline Eigen::MatrixXd h2() {
  Eigen::MatrixXd h(4, 4);
  h << 2, -1, 0, 0, -1, 1, 0, 0, 0, 0, 2, -1, 0, 0, -1, 1;
  return h;
}

}  // namespace example
