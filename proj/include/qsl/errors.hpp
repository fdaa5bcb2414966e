#pragma once

#include <stdexcept>
#include <string>

namespace qsl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed argument: out-of-range parameter, negative time, non-Hermitian input.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Not a valid quantum state (Bloch vector outside the ball, trace != 1, ...).
class InvalidState : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NotPsd : public Error {
public:
    using Error::Error;
};

/// Cyclic Jacobi did not reduce the off-diagonal part within the sweep budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// A rate was evaluated at (or numerically on top of) one of its poles.
class PoleError : public Error {
public:
    PoleError(const std::string& what, double where) : Error(what), where_(where) {}
    double where() const noexcept { return where_; }

private:
    double where_;
};

/// Adaptive quadrature hit its depth limit; carries the best available estimate.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double estimate)
        : Error(what), estimate_(estimate) {}
    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

}  // namespace qsl
