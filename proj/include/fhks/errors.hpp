#pragma once

#include <stdexcept>
#include <string>

namespace fhks {

/// Raised when a parameter or input violates its documented legal range.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a computation leaves its admissible regime: bound violations
/// that survive step rejection, a Picard iteration that stops contracting,
/// divergent quadrature settings.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File-system failures; the message names the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fhks
