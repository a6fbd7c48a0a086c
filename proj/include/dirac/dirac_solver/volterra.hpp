#pragma once

#include <span>
#include <vector>

#include "dirac/function_space/grid.hpp"
#include "dirac/function_space/log_magnitude.hpp"

namespace dirac {

/// Panel-recursive spectral evaluation of the exponentially weighted
/// cumulative integrals
///
///   forward:  F(x) = int_0^x e^{kappa (x - t)} g(t) dt
///   backward: B(x) = int_x^pi e^{kappa (t - x)} g(t) dt
///
/// at every grid node. g is interpolated by the panel polynomial; the
/// exponential is evaluated exactly, so a kernel with Re kappa <= 0 never
/// produces a factor larger than e^{|Re kappa| h} for panel width h.
class ExpKernelIntegrator {
public:
    ExpKernelIntegrator(const Grid& grid, Complex kappa);

    /// Fills out with F at the nodes and returns F(pi).
    Complex forward(std::span<const Complex> g, std::span<Complex> out) const;
    /// Fills out with B at the nodes and returns B(0).
    Complex backward(std::span<const Complex> g, std::span<Complex> out) const;

private:
    std::size_t panels_;
    std::size_t m_;
    Complex panel_factor_;  // e^{kappa h}
    std::vector<Complex> fwd_matrix_, fwd_carry_, fwd_end_;
    std::vector<Complex> bwd_matrix_, bwd_carry_, bwd_start_;
};

}  // namespace dirac
