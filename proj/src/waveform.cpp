#include "leadfollow/waveform.hpp"

#include <cmath>
#include <sstream>

#include "leadfollow/errors.hpp"

namespace leadfollow {

Waveform Waveform::constant(double value) {
  Waveform w;
  w.kind_ = Kind::kConstant;
  w.coefficients_ = {value};
  return w;
}

Waveform Waveform::sine(double amplitude, double frequency, double phase) {
  Waveform w = constant(0.0);
  w.kind_ = Kind::kSine;
  w.coefficients_.clear();
  w.amplitude_ = amplitude;
  w.frequency_ = frequency;
  w.phase_ = phase;
  return w;
}

Waveform Waveform::cosine(double amplitude, double frequency, double phase) {
  Waveform w = sine(amplitude, frequency, phase);
  w.kind_ = Kind::kCosine;
  return w;
}

Waveform Waveform::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) throw InvalidInput("polynomial waveform needs coefficients");
  Waveform w = constant(0.0);
  w.kind_ = Kind::kPolynomial;
  w.coefficients_ = std::move(coefficients);
  return w;
}

double Waveform::operator()(double t) const {
  switch (kind_) {
    case Kind::kConstant:
      return coefficients_.front();
    case Kind::kSine:
      return amplitude_ * std::sin(frequency_ * t + phase_);
    case Kind::kCosine:
      return amplitude_ * std::cos(frequency_ * t + phase_);
    case Kind::kPolynomial: {
      double acc = 0.0;
      for (auto c = coefficients_.rbegin(); c != coefficients_.rend(); ++c) acc = acc * t + *c;
      return acc;
    }
  }
  return 0.0;
}

Waveform Waveform::scaled(double s) const {
  Waveform w = *this;
  w.amplitude_ *= s;
  for (double& c : w.coefficients_) c *= s;
  return w;
}

double Waveform::sup_abs(double horizon) const {
  switch (kind_) {
    case Kind::kConstant:
      return std::abs(coefficients_.front());
    case Kind::kSine:
    case Kind::kCosine:
      return std::abs(amplitude_);
    case Kind::kPolynomial: {
      double acc = 0.0;
      double p = 1.0;
      for (double c : coefficients_) {
        acc += std::abs(c) * p;
        p *= horizon;
      }
      return acc;
    }
  }
  return 0.0;
}

std::string Waveform::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::kConstant:
      out << "constant(" << coefficients_.front() << ")";
      break;
    case Kind::kSine:
    case Kind::kCosine:
      out << (kind_ == Kind::kSine ? "sine(" : "cosine(") << amplitude_ << ", " << frequency_
          << ", " << phase_ << ")";
      break;
    case Kind::kPolynomial:
      out << "polynomial(";
      for (std::size_t i = 0; i < coefficients_.size(); ++i) {
        out << (i ? ", " : "") << coefficients_[i];
      }
      out << ")";
      break;
  }
  return out.str();
}

}  // namespace leadfollow
