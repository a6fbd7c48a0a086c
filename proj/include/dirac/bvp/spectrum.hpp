#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dirac/bvp/boundary.hpp"

namespace dirac {

/// Axis-aligned rectangle in the lambda plane.
struct Rectangle {
    double re_min = 0.0;
    double re_max = 0.0;
    double im_min = 0.0;
    double im_max = 0.0;

    Complex center() const { return {(re_min + re_max) / 2, (im_min + im_max) / 2}; }
    double width() const { return re_max - re_min; }
    double height() const { return im_max - im_min; }
    bool contains(Complex z, double slack = 0.0) const {
        return z.real() >= re_min - slack && z.real() <= re_max + slack && z.imag() >= im_min - slack &&
               z.imag() <= im_max + slack;
    }
    /// Same center, sides scaled by `factor`.
    Rectangle dilated(double factor) const;
    bool operator==(const Rectangle&) const = default;
};

struct EigenRecord {
    Complex lambda;
    int multiplicity = 1;
    Rectangle cell;                 ///< final enclosing cell
    double mantissa = 0.0;          ///< |Delta| mantissa at lambda
    bool refined = false;           ///< mantissa below the requested tolerance
    std::optional<GridFunction2> y;
    std::optional<GridFunction2> z;
    bool biorthogonal = false;
    Complex pairing_value{};        ///< <y, z> before rescaling z
    bool associated_suspected = false;  ///< multiple or near-degenerate pairing
    std::string note;
    double ode_residual = 0.0;
    double boundary_residual = 0.0;
};

struct SpectrumReport {
    std::vector<EigenRecord> records;  ///< sorted by (Re, Im)
    Rectangle region;                  ///< region actually searched (after nudging)
    int winding_total = 0;
    double max_im = 0.0;               ///< max |Im lambda_n|
    int determinant_evaluations = 0;
    int nudges = 0;
};

struct SearchOptions {
    double tolerance = 1e-12;      ///< mantissa target for refinement
    double min_cell = 1e-3;
    std::size_t nodes_per_panel = Grid::kDefaultNodesPerPanel;
    SolverOptions solver{};
    bool build_functions = true;   ///< eigenfunctions and biorthogonal partners
};

/// Argument-principle search for zeros of the characteristic determinant in
/// the rectangle, followed by secant refinement. Throws ContourError when the
/// winding count cannot be made consistent.
SpectrumReport find_eigenvalues(const BoundaryConditions& bc, const Potential& v, const Rectangle& region,
                                const SearchOptions& options = {});

/// Winding number of Delta around the rectangle boundary (diagnostic).
int winding_number(const BoundaryConditions& bc, const Potential& v, const Rectangle& rect,
                   const SearchOptions& options = {});

/// C1 Y1 + C2 Y2 with (C1, C2) the unit null vector of the boundary matrix,
/// its largest coefficient made real and positive. Throws
/// DegenerateEigenvalueError when both singular values vanish.
GridFunction2 null_combination(const BoundaryConditions& bc, const Potential& v, Complex lambda,
                               const GridPtr& grid = nullptr, const SolverOptions& solver = {});

/// Eigenfunction with h_norm 1 and its largest sample real and positive.
/// Throws DegenerateEigenvalueError when multiplicity > 1.
GridFunction2 eigenfunction(const BoundaryConditions& bc, const Potential& v, Complex lambda, int multiplicity = 1,
                            const GridPtr& grid = nullptr, const SolverOptions& solver = {});

/// Builds z_n from the adjoint problem at conj(lambda) on the grid of y and
/// rescales it so that <y, z> = 1. Throws PairingError when
/// |<y, z>| < 1e-10 ||y|| ||z||.
EigenRecord biorthogonal_pair(const GridFunction2& y, const BoundaryConditions& bc, const Potential& v,
                              Complex lambda, const SolverOptions& solver = {});

}  // namespace dirac
