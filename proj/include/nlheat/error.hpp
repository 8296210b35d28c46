#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nlheat {

enum class ErrorKind {
  Structural,    // grid or stamp mismatch
  Domain,        // argument outside the admissible set
  Degenerate,    // zero field, zero gap
  Solver,        // linear solve failed to reach its residual bound
  Positivity,    // a positive state lost positivity
  NonConvergence,
  NotConverged,  // steady tail still moving
  Oracle,
  Config,
  Io,
};

const char* to_string(ErrorKind kind);

/// Library error. `time` is set for positivity loss, `value` carries the
/// last contraction factor (Picard) or the tail variation (steady state).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        double time = std::numeric_limits<double>::quiet_NaN(),
        double value = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), kind_(kind), time_(time), value_(value) {}

  ErrorKind kind() const noexcept { return kind_; }
  double time() const noexcept { return time_; }
  double value() const noexcept { return value_; }

  /// Same error with `context` prepended to the message.
  Error annotated(const std::string& context) const {
    return Error(kind_, context + ": " + what(), time_, value_);
  }

 private:
  ErrorKind kind_;
  double time_;
  double value_;
};

}  // namespace nlheat
