#pragma once

// Independent reference computations used only by tests.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracle {

using C = std::complex<double>;
using Mat = std::array<std::array<C, 2>, 2>;
using Coef = std::function<C(double)>;

inline Mat mul(const Mat& a, const Mat& b) {
    Mat r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return r;
}

// Classical RK4 for Phi' = M(x) Phi, M = ((i lam, -i P), (i Q, -i lam)), Phi(a) = I.
inline Mat rk4_propagator(const Coef& p, const Coef& q, C lam, double a, double b, int steps) {
    const C i(0, 1);
    auto rhs = [&](double x, const Mat& y) {
        const Mat m{{{i * lam, -i * p(x)}, {i * q(x), -i * lam}}};
        return mul(m, y);
    };
    auto axpy = [](const Mat& y, const Mat& k, double h) {
        Mat r = y;
        for (int r0 = 0; r0 < 2; ++r0)
            for (int c = 0; c < 2; ++c) r[r0][c] += h * k[r0][c];
        return r;
    };
    Mat y{{{1, 0}, {0, 1}}};
    const double h = (b - a) / steps;
    for (int s = 0; s < steps; ++s) {
        const double x = a + s * h;
        const Mat k1 = rhs(x, y);
        const Mat k2 = rhs(x + h / 2, axpy(y, k1, h / 2));
        const Mat k3 = rhs(x + h / 2, axpy(y, k2, h / 2));
        const Mat k4 = rhs(x + h, axpy(y, k3, h));
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) y[r][c] += h / 6 * (k1[r][c] + 2.0 * k2[r][c] + 2.0 * k3[r][c] + k4[r][c]);
    }
    return y;
}

// Composite Simpson rule, used as a quadrature independent of Gauss-Legendre.
template <typename F>
auto simpson(F&& f, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    auto s = f(a) + f(b);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
    return s * (h / 3);
}

// ||e^{i lam x}||_{L2(0,pi)} (sign +) or ||e^{-i lam x}|| (sign -).
inline double exp_norm(C lam, bool plus) {
    const double a = plus ? -2 * lam.imag() : 2 * lam.imag();
    if (std::abs(a) < 1e-14) return std::sqrt(std::numbers::pi);
    return std::sqrt(std::expm1(a * std::numbers::pi) / a);
}

// b12 for P = e^{2ix}, Q = 0.
inline C triangular_b12(C lam, double x) {
    const C i(0, 1);
    return -(std::exp(2.0 * i * x) - std::exp(2.0 * i * lam * x)) / (2.0 * (1.0 - lam));
}

// b21 of the adjoint of the same system (P* = 0, Q* = e^{-2ix}) at mu = conj(lam).
inline C triangular_adjoint_b21(C lam, double x) {
    const C i(0, 1);
    const C mu = std::conj(lam);
    return (std::exp(-2.0 * i * x) - std::exp(-2.0 * i * mu * x)) / (2.0 * (mu - 1.0));
}

inline double lemma_ratio_zero(double tau) { return 2 * std::numbers::pi * tau / std::sinh(2 * std::numbers::pi * tau); }

}  // namespace oracle
