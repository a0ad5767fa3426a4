#include "leadfollow/gain_synthesis.hpp"

#include <cmath>

#include "leadfollow/errors.hpp"
#include "leadfollow/spectral.hpp"

namespace leadfollow {

Gains::Gains(double l, double k) : Gains(l, k, l / (k * k)) {}

Gains::Gains(double l, double k, double k0) : l_(l), k_(k), k0_(k0) {
  if (!(l > 0.0) || !(k > 0.0) || !(k0 > 0.0) || !std::isfinite(l) ||
      !std::isfinite(k) || !std::isfinite(k0)) {
    throw InvalidInput("gains l, k, k0 must all be finite and > 0");
  }
}

bool Gains::default_observer_gain() const {
  const double nominal = l_ / (k_ * k_);
  return std::abs(k0_ - nominal) <= 1e-12 * nominal;
}

Gains synthesize_gains(double lambda_min, double lambda_max, double margin) {
  if (!(lambda_min > 0.0)) {
    throw InvalidInput("gain synthesis needs lambda_min > 0 (no connected-mode spectrum)");
  }
  if (!(lambda_max >= lambda_min)) throw InvalidInput("lambda_max must be >= lambda_min");
  if (!(margin >= 0.0)) throw InvalidInput("gain margin must be >= 0");
  const double l = (1.0 + margin) * (2.0 / lambda_min);
  const double k = (1.0 + margin) * (4.0 + lambda_max * l);
  return Gains(l, k);
}

Gains synthesize_gains(const SpectralBounds& bounds, double margin) {
  return synthesize_gains(bounds.lambda_min, bounds.lambda_max, margin);
}

GainValidation validate_gains(const Gains& g, double lambda_min, double lambda_max) {
  GainValidation v{
      {"l >= 2/lambda_min", g.l(), 2.0 / lambda_min},
      {"k >= 4 + lambda_max*l", g.k(), 4.0 + lambda_max * g.l()},
      g.default_observer_gain(),
      g,
  };
  v.gains.certified_ = v.pass();
  return v;
}

}  // namespace leadfollow
