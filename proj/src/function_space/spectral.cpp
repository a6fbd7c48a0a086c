#include "dirac/function_space/spectral.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "dirac/errors.hpp"

namespace dirac {

SpectralParameter::SpectralParameter(Complex lambda, HalfPlane half_plane)
    : lambda_(lambda), half_plane_(half_plane) {
    const double tau = lambda.imag();
    const bool ok = half_plane == HalfPlane::upper ? tau > -kHalfPlaneMargin : tau < kHalfPlaneMargin;
    if (!ok || !std::isfinite(lambda.real()) || !std::isfinite(tau)) {
        std::ostringstream msg;
        msg << "spectral parameter (" << lambda.real() << ", " << tau << ") outside the "
            << (half_plane == HalfPlane::upper ? "upper" : "lower") << " half-plane (margin "
            << kHalfPlaneMargin << ")";
        throw DomainError(msg.str());
    }
}

SpectralParameter SpectralParameter::natural(Complex lambda) {
    return SpectralParameter(lambda, lambda.imag() >= 0.0 ? HalfPlane::upper : HalfPlane::lower);
}

SpectralParameter SpectralParameter::conjugate() const {
    return SpectralParameter(std::conj(lambda_),
                             half_plane_ == HalfPlane::upper ? HalfPlane::lower : HalfPlane::upper);
}

double log_exp_integral(double a) {
    constexpr double pi = std::numbers::pi;
    if (a == 0.0) return std::log(pi);
    if (a > 0.0) return a * pi + std::log(-std::expm1(-a * pi)) - std::log(a);
    return std::log(-std::expm1(a * pi)) - std::log(-a);
}

LogMagnitude exp_l2_norm(Complex lambda, ExpSign sign) {
    // |e^{+i lambda t}|^2 = e^{-2 tau t},  |e^{-i lambda t}|^2 = e^{2 tau t}
    const double tau = lambda.imag();
    const double a = sign == ExpSign::plus ? -2.0 * tau : 2.0 * tau;
    return LogMagnitude::from_log(0.5 * log_exp_integral(a));
}

LogComplex weighted_exp_integral(const Grid& grid, std::span<const Complex> g, Complex omega) {
    constexpr double pi = std::numbers::pi;
    const auto x = grid.nodes();
    const auto w = grid.weights();
    const double anchor = omega.real() > 0.0 ? pi : 0.0;
    Complex acc{};
    for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * g[i] * std::exp(omega * (x[i] - anchor));
    return LogComplex::from_complex(acc) * LogComplex::exp(omega * anchor);
}

}  // namespace dirac
