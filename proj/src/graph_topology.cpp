#include "leadfollow/graph_topology.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace leadfollow {

Topology::Topology(Eigen::MatrixXd weights, Eigen::VectorXd leader_weights)
    : weights_(std::move(weights)), leader_weights_(std::move(leader_weights)) {
  const auto n = weights_.rows();
  if (n == 0 || weights_.cols() != n) {
    throw InvalidInput("topology weights must be a non-empty square matrix");
  }
  if (leader_weights_.size() != n) {
    throw InvalidInput("leader weights length " + std::to_string(leader_weights_.size()) +
                       " does not match agent count " + std::to_string(n));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(leader_weights_(i) >= 0.0) || !std::isfinite(leader_weights_(i))) {
      throw InvalidInput("leader weight b_" + std::to_string(i) + " must be finite and >= 0");
    }
    if (weights_(i, i) != 0.0) {
      throw InvalidInput("weight a_" + std::to_string(i) + std::to_string(i) + " must be 0");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(weights_(i, j) >= 0.0) || !std::isfinite(weights_(i, j))) {
        throw InvalidInput("weight (" + std::to_string(i) + ", " + std::to_string(j) +
                           ") must be finite and >= 0");
      }
      if (weights_(i, j) != weights_(j, i)) {
        throw InvalidInput("weights are not symmetric at (" + std::to_string(i) + ", " +
                           std::to_string(j) + ")");
      }
    }
  }
}

std::vector<int> Topology::neighbors(int i) const {
  std::vector<int> out;
  for (int j = 0; j < agents(); ++j) {
    if (weights_(i, j) > 0.0) out.push_back(j);
  }
  return out;
}

SymMatrix laplacian(const Topology& t) {
  Eigen::MatrixXd l = -t.weights();
  l.diagonal() = t.weights().rowwise().sum();
  return SymMatrix(std::move(l));
}

SymMatrix coupling_matrix(const Topology& t) {
  Eigen::MatrixXd h = laplacian(t).matrix();
  h.diagonal() += t.leader_weights();
  return SymMatrix(std::move(h));
}

namespace {

struct DisjointSets {
  explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
  std::vector<int> parent;
};

}  // namespace

bool is_jointly_connected(const Topology& t) {
  const int n = t.agents();
  DisjointSets sets(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (t.weights()(i, j) > 0.0) sets.unite(i, j);
    }
  }
  std::vector<bool> anchored(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    if (t.sees_leader(i)) anchored[sets.find(i)] = true;
  }
  for (int i = 0; i < n; ++i) {
    if (!anchored[sets.find(i)]) return false;
  }
  return true;
}

SwitchingSchedule::SwitchingSchedule(std::vector<ScheduleEntry> entries, double dwell,
                                     bool cycle)
    : entries_(std::move(entries)), dwell_(dwell), cycle_(cycle) {
  if (entries_.empty()) throw InvalidInput("switching schedule has no entries");
  if (!(dwell_ > 0.0) || !std::isfinite(dwell_)) {
    throw InvalidInput("dwell time must be > 0");
  }
  starts_.reserve(entries_.size() + 1);
  starts_.push_back(0.0);
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    if (!(entries_[j].duration >= dwell_) || !std::isfinite(entries_[j].duration)) {
      throw InvalidInput("schedule entry " + std::to_string(j) + " has duration " +
                         std::to_string(entries_[j].duration) + " < dwell " +
                         std::to_string(dwell_));
    }
    starts_.push_back(starts_.back() + entries_[j].duration);
  }
}

void SwitchingSchedule::check_indices(std::size_t family_size) const {
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    if (entries_[j].topology >= family_size) {
      throw InvalidInput("schedule entry " + std::to_string(j) + " refers to topology " +
                         std::to_string(entries_[j].topology) + " but the family has " +
                         std::to_string(family_size));
    }
  }
}

std::size_t SwitchingSchedule::topology_at(double time) const {
  if (!(time >= 0.0)) throw InvalidInput("schedule queried at negative time");
  const double period = total_duration();
  // Absorbs roundoff in the cumulative switch instants.
  const double snap = 1e-12 * std::max(1.0, time);
  double offset = time;
  if (cycle_) {
    offset = time - std::floor(time / period) * period;
    if (period - offset <= snap) offset = 0.0;
  } else if (time >= period - snap) {
    throw ScheduleExhausted(time);
  }
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    if (offset < starts_[j + 1] - snap) return entries_[j].topology;
  }
  return entries_.back().topology;
}

std::vector<double> SwitchingSchedule::switch_times_between(double t0, double t1) const {
  std::vector<double> out;
  const double period = total_duration();
  if (!cycle_) {
    for (std::size_t j = 1; j < starts_.size(); ++j) {
      if (starts_[j] > t0 && starts_[j] < t1) out.push_back(starts_[j]);
    }
    return out;
  }
  for (double cycle = std::floor(t0 / period); cycle * period < t1; cycle += 1.0) {
    const double base = cycle * period;
    for (std::size_t j = 1; j < starts_.size(); ++j) {
      const double s = base + starts_[j];
      if (s > t0 && s < t1) out.push_back(s);
    }
  }
  return out;
}

}  // namespace leadfollow
