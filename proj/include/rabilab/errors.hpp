#pragma once

#include <stdexcept>
#include <string>

namespace rabilab {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Iterative method failed to converge within its cap.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Fock-space truncation is too small for the requested accuracy.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Summation window around the mean photon number leaks probability mass.
class WindowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RootFindingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid user configuration; message names the offending field.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace rabilab
