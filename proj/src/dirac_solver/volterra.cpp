#include "dirac/dirac_solver/volterra.hpp"

#include <cmath>

namespace dirac {

ExpKernelIntegrator::ExpKernelIntegrator(const Grid& grid, Complex kappa)
    : panels_(grid.panel_count()), m_(grid.nodes_per_panel()) {
    const auto& ref = grid.reference();
    const auto& s = ref.nodes;
    const auto& w = ref.weights;
    const double half = 0.5 * grid.panel_width();
    const Complex k = kappa * half;
    panel_factor_ = std::exp(2.0 * k);

    fwd_matrix_.resize(m_ * m_);
    bwd_matrix_.resize(m_ * m_);
    fwd_carry_.resize(m_);
    bwd_carry_.resize(m_);
    fwd_end_.resize(m_);
    bwd_start_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
        for (std::size_t j = 0; j < m_; ++j) {
            const double left = ref.integrate_left[i * m_ + j];
            fwd_matrix_[i * m_ + j] = half * left * std::exp(k * (s[i] - s[j]));
            bwd_matrix_[i * m_ + j] = half * (w[j] - left) * std::exp(k * (s[j] - s[i]));
        }
        fwd_carry_[i] = std::exp(k * (s[i] + 1.0));
        bwd_carry_[i] = std::exp(k * (1.0 - s[i]));
        fwd_end_[i] = half * w[i] * std::exp(k * (1.0 - s[i]));
        bwd_start_[i] = half * w[i] * std::exp(k * (s[i] + 1.0));
    }
}

Complex ExpKernelIntegrator::forward(std::span<const Complex> g, std::span<Complex> out) const {
    Complex carry{};
    for (std::size_t p = 0; p < panels_; ++p) {
        const std::size_t base = p * m_;
        Complex end = panel_factor_ * carry;
        for (std::size_t i = 0; i < m_; ++i) {
            Complex acc = fwd_carry_[i] * carry;
            const Complex* row = &fwd_matrix_[i * m_];
            for (std::size_t j = 0; j < m_; ++j) acc += row[j] * g[base + j];
            out[base + i] = acc;
            end += fwd_end_[i] * g[base + i];
        }
        carry = end;
    }
    return carry;
}

Complex ExpKernelIntegrator::backward(std::span<const Complex> g, std::span<Complex> out) const {
    Complex carry{};
    for (std::size_t p = panels_; p-- > 0;) {
        const std::size_t base = p * m_;
        Complex start = panel_factor_ * carry;
        for (std::size_t i = 0; i < m_; ++i) {
            Complex acc = bwd_carry_[i] * carry;
            const Complex* row = &bwd_matrix_[i * m_];
            for (std::size_t j = 0; j < m_; ++j) acc += row[j] * g[base + j];
            out[base + i] = acc;
            start += bwd_start_[i] * g[base + i];
        }
        carry = start;
    }
    return carry;
}

}  // namespace dirac
