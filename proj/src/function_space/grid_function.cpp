#include "dirac/function_space/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dirac/errors.hpp"

namespace dirac {

GridFunction2::GridFunction2(GridPtr grid, std::vector<Complex> first, std::vector<Complex> second,
                             double log_scale)
    : grid_(std::move(grid)), first_(std::move(first)), second_(std::move(second)), log_scale_(log_scale) {
    if (!grid_) throw std::invalid_argument("GridFunction2: null grid");
    if (first_.size() != grid_->size() || second_.size() != grid_->size()) {
        throw std::invalid_argument("GridFunction2: component length does not match grid");
    }
}

GridFunction2 GridFunction2::zeros(GridPtr grid) {
    const auto n = grid->size();
    return GridFunction2(std::move(grid), std::vector<Complex>(n), std::vector<Complex>(n));
}

GridFunction2 GridFunction2::materialized() const { return rescaled_to(0.0); }

GridFunction2 GridFunction2::rescaled_to(double log_scale) const {
    GridFunction2 out = *this;
    out.log_scale_ = log_scale;
    const double shift = log_scale_ - log_scale;
    if (shift == 0.0) return out;
    const double factor = std::exp(shift);
    for (auto& v : out.first_) v *= factor;
    for (auto& v : out.second_) v *= factor;
    return out;
}

GridFunction2 GridFunction2::times(const LogComplex& factor) const {
    GridFunction2 out = *this;
    if (factor.is_zero()) {
        std::fill(out.first_.begin(), out.first_.end(), Complex{});
        std::fill(out.second_.begin(), out.second_.end(), Complex{});
        return out;
    }
    const Complex phase = factor.phase();
    for (auto& v : out.first_) v *= phase;
    for (auto& v : out.second_) v *= phase;
    out.log_scale_ += factor.log_abs();
    return out;
}

std::array<Complex, 4> GridFunction2::endpoint_values() const {
    const auto& ref = grid_->reference();
    const std::size_t m = ref.size();
    const std::size_t last = size() - m;
    std::array<Complex, 4> out{};
    for (std::size_t j = 0; j < m; ++j) {
        out[0] += ref.at_left[j] * first_[j];
        out[1] += ref.at_left[j] * second_[j];
        out[2] += ref.at_right[j] * first_[last + j];
        out[3] += ref.at_right[j] * second_[last + j];
    }
    return out;
}

void require_same_grid(const GridFunction2& f, const GridFunction2& g) {
    if (!f.grid() || !g.grid() || !(*f.grid() == *g.grid())) {
        throw GridMismatchError("functions are sampled on distinct grids");
    }
}

namespace {

Complex stored_inner(const GridFunction2& f, const GridFunction2& g) {
    const auto w = f.grid()->weights();
    Complex acc{};
    for (std::size_t i = 0; i < w.size(); ++i) {
        acc += w[i] * (f.first()[i] * std::conj(g.first()[i]) + f.second()[i] * std::conj(g.second()[i]));
    }
    return acc;
}

double stored_norm_sq(const std::vector<Complex>& v, std::span<const double> w) {
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * std::norm(v[i]);
    return acc;
}

}  // namespace

LogComplex log_inner_product(const GridFunction2& f, const GridFunction2& g) {
    require_same_grid(f, g);
    return LogComplex::from_complex(stored_inner(f, g)) *
           LogComplex::exp(Complex(f.log_scale() + g.log_scale(), 0.0));
}

Complex inner_product(const GridFunction2& f, const GridFunction2& g) {
    return log_inner_product(f, g).to_complex();
}

LogMagnitude h_norm(const GridFunction2& f) {
    const auto w = f.grid()->weights();
    const double sq = stored_norm_sq(f.first(), w) + stored_norm_sq(f.second(), w);
    if (sq <= 0.0) return LogMagnitude::zero();
    return LogMagnitude::from_log(0.5 * std::log(sq) + f.log_scale());
}

std::array<LogMagnitude, 2> component_norms(const GridFunction2& f) {
    const auto w = f.grid()->weights();
    std::array<LogMagnitude, 2> out;
    const double sq[2] = {stored_norm_sq(f.first(), w), stored_norm_sq(f.second(), w)};
    for (int k = 0; k < 2; ++k) {
        out[k] = sq[k] > 0.0 ? LogMagnitude::from_log(0.5 * std::log(sq[k]) + f.log_scale())
                             : LogMagnitude::zero();
    }
    return out;
}

GridFunction2 linear_combination(const LogComplex& a, const GridFunction2& f, const LogComplex& b,
                                 const GridFunction2& g) {
    require_same_grid(f, g);
    const double la = a.is_zero() ? -INFINITY : a.log_abs() + f.log_scale();
    const double lb = b.is_zero() ? -INFINITY : b.log_abs() + g.log_scale();
    double scale = std::max(la, lb);
    if (std::isinf(scale)) scale = 0.0;
    const Complex ca = a.is_zero() ? Complex{} : a.phase() * std::exp(la - scale);
    const Complex cb = b.is_zero() ? Complex{} : b.phase() * std::exp(lb - scale);
    std::vector<Complex> first(f.size());
    std::vector<Complex> second(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        first[i] = ca * f.first()[i] + cb * g.first()[i];
        second[i] = ca * f.second()[i] + cb * g.second()[i];
    }
    return GridFunction2(f.grid(), std::move(first), std::move(second), scale);
}

GridFunction2 derivative(const GridFunction2& f) {
    const auto& grid = *f.grid();
    const auto& ref = grid.reference();
    const std::size_t m = ref.size();
    const double factor = 2.0 / grid.panel_width();
    std::vector<Complex> d1(f.size());
    std::vector<Complex> d2(f.size());
    for (std::size_t p = 0; p < grid.panel_count(); ++p) {
        const std::size_t base = p * m;
        for (std::size_t i = 0; i < m; ++i) {
            Complex a{};
            Complex b{};
            for (std::size_t j = 0; j < m; ++j) {
                const double d = ref.differentiate[i * m + j];
                a += d * f.first()[base + j];
                b += d * f.second()[base + j];
            }
            d1[base + i] = factor * a;
            d2[base + i] = factor * b;
        }
    }
    return GridFunction2(f.grid(), std::move(d1), std::move(d2), f.log_scale());
}

double sup_stored(const GridFunction2& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        s = std::max({s, std::abs(f.first()[i]), std::abs(f.second()[i])});
    }
    return s;
}

}  // namespace dirac
