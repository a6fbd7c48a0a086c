#pragma once

#include <span>

#include "dirac/function_space/grid.hpp"
#include "dirac/function_space/log_magnitude.hpp"

namespace dirac {

enum class HalfPlane { upper, lower };

/// Half-plane margin r: the upper plane is Im lambda > -r, the lower Im lambda < r.
inline constexpr double kHalfPlaneMargin = 1.0;
/// Modulus threshold lambda_0 above which the asymptotic statements are scanned.
inline constexpr double kAsymptoticModulus = 1.0;

/// Spectral parameter lambda tagged with the half-plane whose asymptotic
/// representation is used for it.
class SpectralParameter {
public:
    /// Throws DomainError when Im lambda lies outside the requested half-plane.
    SpectralParameter(Complex lambda, HalfPlane half_plane);

    /// Upper plane for Im lambda >= 0, lower plane otherwise.
    static SpectralParameter natural(Complex lambda);

    Complex lambda() const { return lambda_; }
    double sigma() const { return lambda_.real(); }
    double tau() const { return lambda_.imag(); }
    HalfPlane half_plane() const { return half_plane_; }

    /// conj(lambda) in the mirrored half-plane.
    SpectralParameter conjugate() const;

private:
    Complex lambda_;
    HalfPlane half_plane_;
};

/// log of the integral of e^{a t} over (0, pi), for real a.
double log_exp_integral(double a);

enum class ExpSign { plus, minus };

/// L2(0, pi) norm of e^{+i lambda t} (plus) or e^{-i lambda t} (minus), in
/// closed form.
LogMagnitude exp_l2_norm(Complex lambda, ExpSign sign);
inline LogMagnitude exp_l2_norm(const SpectralParameter& lambda, ExpSign sign) {
    return exp_l2_norm(lambda.lambda(), sign);
}

/// Quadrature of integral g(x) e^{omega x} dx over (0, pi), with the exponential
/// factored so that no sample overflows.
LogComplex weighted_exp_integral(const Grid& grid, std::span<const Complex> g, Complex omega);

}  // namespace dirac
