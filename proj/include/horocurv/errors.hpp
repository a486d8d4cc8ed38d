// errors.hpp - exception taxonomy for the toolkit. Chart violations and bad
// arguments use the std exceptions directly; the named types below mark
// numerical failure modes that callers may want to recover from.
#pragma once

#include <stdexcept>
#include <string>

namespace horocurv {

// Riccati integration ran out of horizon without reaching the requested
// convergence gap.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// A Riccati trajectory left the guarded entry range (finite-time blow-up,
// typically a sign that the curvature data is not negative).
class BlowUpError : public std::runtime_error {
 public:
  explicit BlowUpError(const std::string& what) : std::runtime_error(what) {}
};

// Frame re-orthonormalization lost rank (conditioning below the floor).
class FrameDegenerationError : public std::runtime_error {
 public:
  explicit FrameDegenerationError(const std::string& what)
      : std::runtime_error(what) {}
};

// An operation was asked of a model that does not support it (e.g. the
// integrated flow identities on a model without homogeneous integrands).
class CapabilityError : public std::runtime_error {
 public:
  explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace horocurv
