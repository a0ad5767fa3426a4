#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "leadfollow/spectral.hpp"

namespace leadfollow {

// Weighted undirected follower graph together with the leader -> follower
// attachment weights. Immutable once built.
class Topology {
 public:
  // weights: n x n, symmetric (exactly), zero diagonal, nonnegative.
  // leader_weights: length n, nonnegative.
  Topology(Eigen::MatrixXd weights, Eigen::VectorXd leader_weights);

  int agents() const { return static_cast<int>(weights_.rows()); }
  const Eigen::MatrixXd& weights() const { return weights_; }
  const Eigen::VectorXd& leader_weights() const { return leader_weights_; }

  // Agents j with a_ij > 0.
  std::vector<int> neighbors(int i) const;
  bool sees_leader(int i) const { return leader_weights_(i) > 0.0; }

  bool operator==(const Topology& other) const {
    return weights_ == other.weights_ && leader_weights_ == other.leader_weights_;
  }

 private:
  Eigen::MatrixXd weights_;
  Eigen::VectorXd leader_weights_;
};

// L_ii = sum_j a_ij, L_ij = -a_ij.
SymMatrix laplacian(const Topology& t);

// H = L + diag(b).
SymMatrix coupling_matrix(const Topology& t);

// True iff every connected component of the follower graph contains an
// agent with b_i > 0.
bool is_jointly_connected(const Topology& t);

struct ScheduleEntry {
  std::size_t topology = 0;
  double duration = 0.0;

  bool operator==(const ScheduleEntry&) const = default;
};

// Piecewise-constant assignment of topologies over [0, inf) (cycling) or
// over [0, total_duration()) otherwise. Switch instants are right-continuous:
// the new mode already holds at the switch time.
class SwitchingSchedule {
 public:
  SwitchingSchedule(std::vector<ScheduleEntry> entries, double dwell, bool cycle);

  const std::vector<ScheduleEntry>& entries() const { return entries_; }
  double dwell() const { return dwell_; }
  bool cycles() const { return cycle_; }
  double total_duration() const { return starts_.back(); }

  // Throws InvalidInput if an entry refers past the family.
  void check_indices(std::size_t family_size) const;

  // Throws ScheduleExhausted past the end of a non-cycling schedule.
  std::size_t topology_at(double time) const;

  // Switch instants strictly inside (t0, t1). For a non-cycling schedule
  // the end of the last entry counts as a switch.
  std::vector<double> switch_times_between(double t0, double t1) const;

  bool operator==(const SwitchingSchedule& other) const {
    return entries_ == other.entries_ && dwell_ == other.dwell_ &&
           cycle_ == other.cycle_;
  }

 private:
  std::vector<ScheduleEntry> entries_;
  double dwell_;
  bool cycle_;
  std::vector<double> starts_;  // cumulative; size entries + 1
};

}  // namespace leadfollow
