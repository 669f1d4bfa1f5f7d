#pragma once

#include <stdexcept>
#include <string>

namespace mframes {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// φ_u × φ_v degenerates: the parametrization is not an immersion at the point.
class ImmersionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gaussian curvature is not strictly negative, so asymptotic data is undefined.
class NotHyperbolicError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation's stated precondition does not hold for its input.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sampling too coarse to resolve a field (e.g. frame sign propagation).
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mframes
