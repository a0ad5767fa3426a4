#include "leadfollow/gain_synthesis.hpp"

#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "example_graphs.hpp"
#include "leadfollow/errors.hpp"
#include "leadfollow/spectral.hpp"

namespace leadfollow {
namespace {

TEST(Gains, DefaultObserverGain) {
  const Gains g(40.0, 200.0);
  EXPECT_DOUBLE_EQ(g.k0(), 40.0 / 40000.0);
  EXPECT_TRUE(g.default_observer_gain());
  EXPECT_FALSE(g.certified());
  EXPECT_FALSE(Gains(40.0, 200.0, 0.01).default_observer_gain());
}

TEST(Gains, RejectsNonPositive) {
  EXPECT_THROW(Gains(0.0, 1.0), InvalidInput);
  EXPECT_THROW(Gains(1.0, -1.0), InvalidInput);
  EXPECT_THROW(Gains(1.0, 1.0, 0.0), InvalidInput);
  EXPECT_THROW(Gains(NAN, 1.0), InvalidInput);
}

TEST(Synthesize, UnitBounds) {
  const Gains g = synthesize_gains(1.0, 1.0, 0.0);
  EXPECT_DOUBLE_EQ(g.l(), 2.0);
  EXPECT_DOUBLE_EQ(g.k(), 6.0);
  EXPECT_DOUBLE_EQ(g.k0(), 2.0 / 36.0);
}

TEST(Synthesize, SecondExample) {
  const Gains g = synthesize_gains(2.0, 4.0, 0.0);
  EXPECT_DOUBLE_EQ(g.l(), 1.0);
  EXPECT_DOUBLE_EQ(g.k(), 8.0);
  EXPECT_DOUBLE_EQ(g.k0(), 1.0 / 64.0);
}

TEST(Synthesize, Errors) {
  EXPECT_THROW(synthesize_gains(0.0, 1.0), InvalidInput);
  EXPECT_THROW(synthesize_gains(-1.0, 1.0), InvalidInput);
  EXPECT_THROW(synthesize_gains(2.0, 1.0), InvalidInput);
  EXPECT_THROW(synthesize_gains(1.0, 1.0, -0.1), InvalidInput);
}

TEST(Validate, BoundaryPassesWithZeroSlack) {
  const auto r = validate_gains(Gains(2.0, 6.0), 1.0, 1.0);
  EXPECT_TRUE(r.pass());
  EXPECT_DOUBLE_EQ(r.position.slack(), 0.0);
  EXPECT_DOUBLE_EQ(r.damping.slack(), 0.0);
  EXPECT_TRUE(r.gains.certified());
  EXPECT_TRUE(r.default_observer_gain);
}

TEST(Validate, FailsOnPosition) {
  const auto r = validate_gains(Gains(1.0, 6.0), 1.0, 1.0);
  EXPECT_FALSE(r.pass());
  EXPECT_FALSE(r.position.pass());
  EXPECT_TRUE(r.damping.pass());
  EXPECT_FALSE(r.gains.certified());
}

TEST(Validate, ExampleFamily) {
  // Bounds from an independent eigen solver.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e1(example::h1());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e2(example::h2());
  const double lo = std::min(e1.eigenvalues()(0), e2.eigenvalues()(0));
  const double hi = std::max(e1.eigenvalues()(3), e2.eigenvalues()(3));
  EXPECT_TRUE(validate_gains(Gains(40.0, 200.0), lo, hi).pass());
  EXPECT_TRUE(validate_gains(synthesize_gains(lo, hi), lo, hi).pass());

  const std::vector<SymMatrix> fam{SymMatrix(example::h1()), SymMatrix(example::h2())};
  const Gains s = synthesize_gains(spectral_bounds(fam));
  EXPECT_NEAR(s.l(), 1.05 * 2.0 / lo, 1e-9);
}

TEST(Validate, FlagsNonDefaultObserverGain) {
  const auto r = validate_gains(Gains(2.0, 6.0, 0.5), 1.0, 1.0);
  EXPECT_TRUE(r.pass());
  EXPECT_FALSE(r.default_observer_gain);
}

TEST(SynthesisProperties, RoundTripAndMonotone) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(1e-3, 10.0);
  std::uniform_real_distribution<double> mu(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    double lo = u(rng), hi = u(rng);
    if (lo > hi) std::swap(lo, hi);
    const double margin = trial % 5 == 0 ? 0.0 : mu(rng);
    const Gains g = synthesize_gains(lo, hi, margin);
    EXPECT_TRUE(validate_gains(g, lo, hi).pass()) << lo << " " << hi << " " << margin;
    EXPECT_TRUE(g.default_observer_gain());

    const Gains wider = synthesize_gains(lo, hi * 1.5, margin);
    EXPECT_GE(wider.k(), g.k());
    const Gains lower = synthesize_gains(lo * 0.5, hi, margin);
    EXPECT_GE(lower.l(), g.l());
  }
}

}  // namespace
}  // namespace leadfollow
