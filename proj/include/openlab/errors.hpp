// errors.hpp: exception types shared by all modules

#pragma once

#include <stdexcept>
#include <string>

namespace openlab {

// Input or configuration problems. The CLI maps these to exit code 1.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : ValidationError {
    using ValidationError::ValidationError;
};

struct SingularLimit : ValidationError {
    using ValidationError::ValidationError;
};

struct GridError : ValidationError {
    using ValidationError::ValidationError;
};

struct UnsupportedConfiguration : ValidationError {
    using ValidationError::ValidationError;
};

// dt above the explicit stability bound
struct StabilityError : ValidationError {
    StabilityError(const std::string& msg, double bound_)
        : ValidationError(msg), bound(bound_) {}
    double bound;
};

// Failures during a computation. The CLI maps these to exit code 2.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegratorError : NumericalError {
    using NumericalError::NumericalError;
};

struct QuadratureError : NumericalError {
    using NumericalError::NumericalError;
};

struct PoleError : NumericalError {
    PoleError(const std::string& msg, double t_critical_)
        : NumericalError(msg), t_critical(t_critical_) {}
    double t_critical;
};

struct SingularPoint : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace openlab
