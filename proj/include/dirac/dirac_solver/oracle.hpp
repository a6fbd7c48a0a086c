#pragma once

#include <array>

#include "dirac/function_space/log_magnitude.hpp"
#include "dirac/function_space/spectral.hpp"

namespace dirac {

using Matrix2 = std::array<std::array<Complex, 2>, 2>;

/// Propagator e^{M x} of y' = M y, M = ((i lambda, -i p), (i q, -i lambda)):
/// cos(mu x) I + sin(mu x)/mu M with mu^2 = lambda^2 - p q.
Matrix2 constant_propagator(Complex p, Complex q, Complex lambda, double x);

/// Closed-form fundamental matrix for constant P = p, Q = q, with columns
/// re-based to the anchors used by solve_fundamental in the given half-plane.
Matrix2 oracle_constant(Complex p, Complex q, Complex lambda, double x, HalfPlane plane);
inline Matrix2 oracle_constant(Complex p, Complex q, Complex lambda, double x) {
    return oracle_constant(p, q, lambda, x, lambda.imag() >= 0.0 ? HalfPlane::upper : HalfPlane::lower);
}

}  // namespace dirac
