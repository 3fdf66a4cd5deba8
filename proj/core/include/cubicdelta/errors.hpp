#pragma once

#include <stdexcept>
#include <string>

namespace cubicdelta {

/// Input lies outside the range an operation can evaluate at acceptable cost.
class ScaleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A checked identity or structural invariant failed at runtime.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The prime divides 6 * F_1 * ... * F_m.
class BadPrime : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// (c, p) fails the admissibility conditions required by a closed form.
class Inadmissible : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace cubicdelta
