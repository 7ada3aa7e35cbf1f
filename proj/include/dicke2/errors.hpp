#pragma once

#include <stdexcept>

namespace dicke2 {

// Invalid arguments or physical parameters. CLI exit code 2.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Parameter regimes the closed-form theory does not cover (e.g. omega_a = 0).
struct UnsupportedParameterError : DomainError {
    using DomainError::DomainError;
};

// Solver failures: non-convergence, step-size underflow, accuracy violations.
// CLI exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Hilbert-space dimension or similar budget exceeded. CLI exit code 4.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dicke2
