#pragma once

#include <stdexcept>
#include <string>

namespace dualmortar {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid or degenerate geometry (singular Jacobian, failed inversion).
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Ill-conditioned or singular algebraic system.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A basis could not be constructed from the given input.
class ConstructionError : public Error {
public:
    using Error::Error;
};

/// Inconsistent configuration or usage.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace dualmortar
