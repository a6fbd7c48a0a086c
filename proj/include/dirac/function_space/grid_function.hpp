#pragma once

#include <array>
#include <vector>

#include "dirac/function_space/grid.hpp"
#include "dirac/function_space/log_magnitude.hpp"

namespace dirac {

/// Pair of complex functions on (0, pi) sampled at the nodes of a Grid.
///
/// Stored values are multiplied by exp(log_scale) to obtain the represented
/// function, so functions of size e^{pi |Im lambda|} stay representable.
class GridFunction2 {
public:
    GridFunction2() = default;
    GridFunction2(GridPtr grid, std::vector<Complex> first, std::vector<Complex> second,
                  double log_scale = 0.0);

    static GridFunction2 zeros(GridPtr grid);
    /// Samples f(x) = col(first(x), second(x)).
    template <typename F1, typename F2>
    static GridFunction2 sample(GridPtr grid, F1&& first, F2&& second) {
        std::vector<Complex> a(grid->size());
        std::vector<Complex> b(grid->size());
        const auto x = grid->nodes();
        for (std::size_t i = 0; i < x.size(); ++i) {
            a[i] = first(x[i]);
            b[i] = second(x[i]);
        }
        return GridFunction2(std::move(grid), std::move(a), std::move(b));
    }

    const GridPtr& grid() const { return grid_; }
    std::size_t size() const { return first_.size(); }
    const std::vector<Complex>& first() const { return first_; }
    const std::vector<Complex>& second() const { return second_; }
    std::vector<Complex>& first() { return first_; }
    std::vector<Complex>& second() { return second_; }
    double log_scale() const { return log_scale_; }

    /// Same function with the scale folded into the samples (may overflow).
    GridFunction2 materialized() const;
    /// Same function re-expressed with the given log scale.
    GridFunction2 rescaled_to(double log_scale) const;
    /// Multiplies the represented function by a scalar.
    GridFunction2 times(const LogComplex& factor) const;

    /// Spectral extrapolation of both components to x = 0 and x = pi,
    /// returned as (f1(0), f2(0), f1(pi), f2(pi)) in stored scale.
    std::array<Complex, 4> endpoint_values() const;

private:
    GridPtr grid_;
    std::vector<Complex> first_;
    std::vector<Complex> second_;
    double log_scale_ = 0.0;
};

void require_same_grid(const GridFunction2& f, const GridFunction2& g);

/// <f, g> = integral of f1 conj(g1) + f2 conj(g2) over (0, pi).
Complex inner_product(const GridFunction2& f, const GridFunction2& g);
LogComplex log_inner_product(const GridFunction2& f, const GridFunction2& g);

LogMagnitude h_norm(const GridFunction2& f);
/// L2(0, pi) norms of the two components separately.
std::array<LogMagnitude, 2> component_norms(const GridFunction2& f);

/// a f + b g, computed in a common log scale.
GridFunction2 linear_combination(const LogComplex& a, const GridFunction2& f, const LogComplex& b,
                                 const GridFunction2& g);

/// Panel-local spectral derivative of both components (stored scale).
GridFunction2 derivative(const GridFunction2& f);

/// Largest sample modulus in stored scale.
double sup_stored(const GridFunction2& f);

}  // namespace dirac
