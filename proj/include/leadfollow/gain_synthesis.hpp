#pragma once

#include <optional>
#include <string>

namespace leadfollow {

struct GainValidation;
struct SpectralBounds;

// Controller gains l (position coupling), k (velocity damping) and the
// observer coupling k0. k0 = l / k^2 unless given explicitly.
class Gains {
 public:
  Gains(double l, double k);
  Gains(double l, double k, double k0);

  double l() const { return l_; }
  double k() const { return k_; }
  double k0() const { return k0_; }

  // k0 equals l / k^2 to 1e-12 relative.
  bool default_observer_gain() const;

  // Set only on the copy returned by validate_gains when every inequality holds.
  bool certified() const { return certified_; }

  bool operator==(const Gains& o) const {
    return l_ == o.l_ && k_ == o.k_ && k0_ == o.k0_;
  }

 private:
  friend GainValidation validate_gains(const Gains&, double, double);

  double l_;
  double k_;
  double k0_;
  bool certified_ = false;
};

inline constexpr double kDefaultGainMargin = 0.05;

// l = (1 + margin) * 2 / lambda_min, k = (1 + margin) * (4 + lambda_max * l).
Gains synthesize_gains(double lambda_min, double lambda_max,
                       double margin = kDefaultGainMargin);
Gains synthesize_gains(const SpectralBounds& bounds, double margin = kDefaultGainMargin);

struct GainInequality {
  std::string name;
  double value;  // left-hand side
  double bound;  // right-hand side
  double slack() const { return value - bound; }
  bool pass() const { return value >= bound; }
};

struct GainValidation {
  GainInequality position;  // l >= 2 / lambda_min
  GainInequality damping;   // k >= 4 + lambda_max * l
  bool default_observer_gain;
  Gains gains;
  bool pass() const { return position.pass() && damping.pass(); }
};

GainValidation validate_gains(const Gains& g, double lambda_min, double lambda_max);

}  // namespace leadfollow
