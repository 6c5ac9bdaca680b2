#pragma once

#include <stdexcept>
#include <string>

namespace kotoc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid physical parameters (odd N, non-positive period, size caps).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Operands with incompatible dimensions.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// An eigendecomposition did not reach the requested accuracy.
class DecompositionError : public Error {
public:
    DecompositionError(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// A fit could not be performed on the requested window.
class FitError : public Error {
public:
    using Error::Error;
};

/// Malformed experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace kotoc
