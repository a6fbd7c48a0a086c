#pragma once

#include <array>
#include <span>
#include <vector>

#include "dirac/dirac_solver/potential.hpp"
#include "dirac/function_space/grid_function.hpp"
#include "dirac/function_space/spectral.hpp"

namespace dirac {

enum class SystemKind { direct, adjoint };

struct SolverOptions {
    double tolerance = 1e-12;
    int max_iterations = 200;
};

struct PicardReport {
    int iterations = 0;             ///< larger of the two column solves
    double final_update_sup = 0.0;  ///< larger of the two final updates
    double remainder_sup = 0.0;     ///< max |b_jk| over nodes and endpoints
    double remainder_w11 = 0.0;     ///< max_jk ||b_jk||_L1 + ||b_jk'||_L1
    double liouville_deviation = 0.0;
    std::array<std::vector<double>, 2> update_history;  ///< per column
};

/// Fundamental matrix in factored form
///
///   Y_jk(x) = (delta_jk + b_jk(x)) e^{omega_k x},
///   omega_1 = i mu, omega_2 = -i mu,
///
/// with mu = lambda for the direct system and mu = conj(lambda) for the
/// adjoint system. Upper half-plane anchors: b11(0) = b12(0) = b22(0) = 0,
/// b21(pi) = 0. Lower half-plane: b11(0) = b21(0) = b22(0) = 0, b12(pi) = 0.
class FundamentalMatrix {
public:
    FundamentalMatrix(SpectralParameter lambda, SystemKind system, GridPtr grid,
                      std::array<std::vector<Complex>, 4> remainders, std::array<Complex, 4> at_left,
                      std::array<Complex, 4> at_right);

    /// The user-facing spectral parameter (lambda, not its conjugate).
    const SpectralParameter& lambda() const { return lambda_; }
    /// The parameter that enters the phases (conj(lambda) for the adjoint system).
    Complex phase_parameter() const;
    SystemKind system() const { return system_; }
    HalfPlane anchor_plane() const;
    const GridPtr& grid() const { return grid_; }

    /// b_jk at the nodes; j, k in {0, 1}.
    std::span<const Complex> remainder(int j, int k) const { return b_[index(j, k)]; }
    Complex remainder_at_left(int j, int k) const { return left_[index(j, k)]; }
    Complex remainder_at_right(int j, int k) const { return right_[index(j, k)]; }

    Complex phase_exponent(int k) const;
    /// Log of the column scale factor, max(0, Re(omega_k) pi).
    double column_log_scale(int k) const;

    /// Column k as a scaled grid function, exact up to quadrature.
    GridFunction2 column(int k) const;
    /// (y1(0), y2(0), y1(pi), y2(pi)) of column k, in log form.
    std::array<LogComplex, 4> column_endpoints(int k) const;
    /// Single entry Y_jk at node i.
    LogComplex entry(int j, int k, std::size_t node) const;

    /// (1 + b11)(1 + b22) - b12 b21 at node i.
    Complex dephased_det(std::size_t node) const;
    Complex dephased_det_at_left() const;

private:
    static std::size_t index(int j, int k) { return static_cast<std::size_t>(2 * j + k); }

    SpectralParameter lambda_;
    SystemKind system_;
    GridPtr grid_;
    std::array<std::vector<Complex>, 4> b_;
    std::array<Complex, 4> left_;
    std::array<Complex, 4> right_;
};

struct FundamentalSolution {
    FundamentalMatrix matrix;
    PicardReport report;
};

/// Builds the fundamental matrix of B y' + V y = lambda y (direct) or
/// B z' + V* z = conj(lambda) z (adjoint).
///
/// Each column is obtained by Picard iteration of Volterra equations for its
/// remainders. The mixed-anchor column (b21(pi) = 0 in the upper plane,
/// b12(pi) = 0 in the lower) is computed from the solution anchored entirely
/// at x = pi and renormalized at x = 0; it solves the same fixed-point system.
/// Throws DivergenceError if an iteration does not converge and DomainError
/// if the renormalization is singular.
FundamentalSolution solve_fundamental(const Potential& v, const SpectralParameter& lambda, SystemKind system,
                                      const GridPtr& grid, const SolverOptions& options = {});

/// sup over nodes of |B y' + V y - lambda y| divided by sup |y|, with y'
/// from panel-local spectral differentiation.
double ode_residual(const GridFunction2& f, const Potential& v, Complex lambda);

struct DecayRow {
    double sigma = 0.0;
    double tau = 0.0;
    double abs_lambda = 0.0;
    double remainder_sup = 0.0;
    double remainder_w11 = 0.0;
};

struct DecayScan {
    std::vector<DecayRow> rows;  ///< ascending |lambda|
    bool non_increasing = true;  ///< within 20% slack between neighbours
    double w11_bound = 0.0;      ///< empirical bound on the W^1_1 column
};

/// Solves along Im lambda = tau for each sigma and tabulates the remainder
/// sizes.
DecayScan remainder_decay_scan(const Potential& v, std::span<const double> sigmas, double tau,
                               std::size_t nodes_per_panel = Grid::kDefaultNodesPerPanel,
                               const SolverOptions& options = {}, unsigned threads = 1);

}  // namespace dirac
