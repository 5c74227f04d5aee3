#pragma once

#include <stdexcept>
#include <string>

namespace qfp {

// Argument outside the mathematical domain of an operation. CLI exit code 2.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Both hypotheses share a visibility; the optimal exponent is not unique.
class DegenerateError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Root bracketing or iterative refinement failed. CLI exit code 3.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured resource limit (slot count, Poisson mean) was exceeded.
// CLI exit code 4.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}

}  // namespace detail
}  // namespace qfp
