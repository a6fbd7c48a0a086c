#pragma once

#include <stdexcept>
#include <string>

namespace dirac {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two operands live on different quadrature grids.
class GridMismatchError : public Error {
public:
    using Error::Error;
};

/// A spectral parameter lies outside the half-plane requested for it.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Picard iteration did not reach its tolerance.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, double last_update)
        : Error(what), last_update_(last_update) {}
    double last_update() const { return last_update_; }

private:
    double last_update_;
};

/// Argument-principle contour could not be evaluated reliably.
class ContourError : public Error {
public:
    using Error::Error;
};

/// Eigenvalue is not simple where a simple one is required.
class DegenerateEigenvalueError : public Error {
public:
    using Error::Error;
};

/// Eigenfunction and adjoint eigenfunction are (nearly) orthogonal.
class PairingError : public Error {
public:
    using Error::Error;
};

/// Record is not biorthogonally normalized.
class NormalizationError : public Error {
public:
    using Error::Error;
};

/// Mismatched direct/adjoint fundamental matrices.
class PairingMismatchError : public Error {
public:
    using Error::Error;
};

/// Malformed input (CSV, configuration) detected before any numerics.
class InputError : public Error {
public:
    using Error::Error;
};

}  // namespace dirac
