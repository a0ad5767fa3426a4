#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace leadfollow {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument does not hold (asymmetric matrix, bad size...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A non-cycling switching schedule was queried past its last entry.
class ScheduleExhausted : public Error {
 public:
  explicit ScheduleExhausted(double time)
      : Error("switching schedule exhausted at t=" + std::to_string(time)),
        time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

// Integration produced a non-finite value.
class Diverged : public Error {
 public:
  explicit Diverged(double time)
      : Error("state diverged (non-finite value) at t=" + std::to_string(time)),
        time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

// A mode whose follower graph leaves some component without a leader link
// was used where a jointly connected one is required.
class NotConnected : public Error {
 public:
  using Error::Error;
};

// An algebraic identity that must hold exactly did not; indicates a bug.
class InternalConsistency : public Error {
 public:
  using Error::Error;
};

// Invalid scenario configuration. Carries every problem found, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> messages)
      : Error(join(messages)), messages_(std::move(messages)) {}
  const std::vector<std::string>& messages() const { return messages_; }

 private:
  static std::string join(const std::vector<std::string>& m) {
    std::string out;
    for (const auto& s : m) {
      if (!out.empty()) out += "\n";
      out += s;
    }
    return out;
  }
  std::vector<std::string> messages_;
};

}  // namespace leadfollow
