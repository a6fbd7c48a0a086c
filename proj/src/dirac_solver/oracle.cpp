#include "dirac/dirac_solver/oracle.hpp"

#include <cmath>
#include <numbers>

namespace dirac {

Matrix2 constant_propagator(Complex p, Complex q, Complex lambda, double x) {
    constexpr Complex i{0.0, 1.0};
    const Complex mu = std::sqrt(lambda * lambda - p * q);
    Complex c;
    Complex s;  // sin(mu x) / mu
    if (std::abs(mu * x) < 1e-6) {
        const Complex z2 = mu * mu * x * x;
        c = 1.0 - z2 / 2.0 + z2 * z2 / 24.0;
        s = x * (1.0 - z2 / 6.0 + z2 * z2 / 120.0);
    } else {
        c = std::cos(mu * x);
        s = std::sin(mu * x) / mu;
    }
    return {{{c + s * i * lambda, -s * i * p}, {s * i * q, c - s * i * lambda}}};
}

Matrix2 oracle_constant(Complex p, Complex q, Complex lambda, double x, HalfPlane plane) {
    // The mixed-anchor column is propagated backward from pi, where its
    // growing mode dominates: Phi(x - pi) = Phi(x) Phi(-pi) is a constant
    // change of basis of Phi(x).
    constexpr double pi = std::numbers::pi;
    const Matrix2 phi = constant_propagator(p, q, lambda, x);
    const Matrix2 back = constant_propagator(p, q, lambda, x - pi);
    const Matrix2 full_back = constant_propagator(p, q, lambda, -pi);
    Matrix2 out;
    if (plane == HalfPlane::upper) {
        // column 1: y1(0) = 1, y2(pi) = 0; column 2: y(0) = (0, 1)
        const Complex norm = full_back[0][0];
        for (int j = 0; j < 2; ++j) {
            out[j][0] = back[j][0] / norm;
            out[j][1] = phi[j][1];
        }
    } else {
        // column 1: y(0) = (1, 0); column 2: y2(0) = 1, y1(pi) = 0
        const Complex norm = full_back[1][1];
        for (int j = 0; j < 2; ++j) {
            out[j][0] = phi[j][0];
            out[j][1] = back[j][1] / norm;
        }
    }
    return out;
}

}  // namespace dirac
