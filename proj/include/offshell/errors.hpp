#pragma once

#include <stdexcept>
#include <string>

namespace offshell {

/// A state or argument lies outside the above-mass-shell domain
/// (eps <= 0, u.t <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An internal Runge-Kutta stage left the domain; the caller retries with a
/// smaller step.
class DomainStepError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Invalid model parameters or scenario configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative solver did not converge within its budget.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A generalized-function pairing was evaluated at one of its poles.
class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Too few samples to extrapolate a blow-up time.
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace offshell
