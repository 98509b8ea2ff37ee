#ifndef RADWAVE_ERRORS_HPP
#define RADWAVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace radwave {

/// Invalid parameters, grids, exponents or configuration keys.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Regularity s at or below the admissibility threshold for the power p.
class AdmissibilityError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Dyadic frequency outside the band the grid can resolve.
class BandError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Data support plus horizon reaches the artificial outer wall.
class DomainOfDependenceError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Non-finite or otherwise unusable numeric input (sampled profiles, fit data).
class InputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Failure during a computation. Carries the simulation time when known.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, double time = 0.0)
      : std::runtime_error(what), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Mass leaked into the outer tenth of the grid during a run.
class BoundaryContaminationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace radwave

#endif  // RADWAVE_ERRORS_HPP
