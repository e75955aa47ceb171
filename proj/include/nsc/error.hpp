#pragma once

#include <stdexcept>
#include <string>

namespace nsc {

/// Raised when an argument violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when the integrator produces non-finite values.
class NumericalBreakdown : public std::runtime_error {
 public:
  NumericalBreakdown(const std::string& what, double t)
      : std::runtime_error(what), time_(t) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace nsc
