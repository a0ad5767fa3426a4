#pragma once

#include <string>
#include <vector>

namespace leadfollow {

// Scalar time signal drawn from a small closed set of shapes.
class Waveform {
 public:
  enum class Kind { kConstant, kSine, kCosine, kPolynomial };

  Waveform() = default;  // constant 0

  static Waveform constant(double value);
  // amplitude * sin(frequency * t + phase)
  static Waveform sine(double amplitude, double frequency, double phase = 0.0);
  // amplitude * cos(frequency * t + phase)
  static Waveform cosine(double amplitude, double frequency, double phase = 0.0);
  // c[0] + c[1] t + c[2] t^2 + ...
  static Waveform polynomial(std::vector<double> coefficients);

  double operator()(double t) const;

  // Same shape with its output multiplied by s.
  Waveform scaled(double s) const;

  // Upper bound on |w(t)| for t in [0, horizon]. Exact for constants and
  // sinusoids; for polynomials, sum |c_i| horizon^i.
  double sup_abs(double horizon) const;

  Kind kind() const { return kind_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  double amplitude() const { return amplitude_; }
  double frequency() const { return frequency_; }
  double phase() const { return phase_; }

  std::string describe() const;

  bool operator==(const Waveform&) const = default;

 private:
  Kind kind_ = Kind::kConstant;
  double amplitude_ = 0.0;
  double frequency_ = 0.0;
  double phase_ = 0.0;
  std::vector<double> coefficients_{0.0};
};

}  // namespace leadfollow
