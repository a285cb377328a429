#ifndef LEVYCOUPLE_ERROR_HPP_
#define LEVYCOUPLE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace levycouple {

// Argument outside the domain of an operation (negative radius, point off a
// tabulated grid, empty sample, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The measure puts no mass where a draw was requested.
class NoMassError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The measure violates a structural requirement (eta vanishing on (0, r],
// non-monotone tail, negative density, ...).
class InvalidMeasureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Experiment parameters violate a precondition (delta < 2 eps, a >= 1, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The Fourier oracle cannot produce a trustworthy answer for this measure.
class OracleUnavailableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientDataError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A path-wise coupling invariant failed during a replication.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace levycouple

#endif  // LEVYCOUPLE_ERROR_HPP_
