#pragma once

#include <array>
#include <optional>

#include <Eigen/Dense>

#include "dirac/dirac_solver/fundamental.hpp"

namespace dirac {

using BoundaryMatrix = Eigen::Matrix<Complex, 2, 4>;

/// Two forms U_i(y) = a_i1 y1(0) + a_i2 y2(0) + a_i3 y1(pi) + a_i4 y2(pi).
class BoundaryConditions {
public:
    /// Throws InputError unless rank(a) = 2 (singular value ratio > 1e-10).
    explicit BoundaryConditions(const BoundaryMatrix& a);

    /// {y1(0), y2(0) - 2 y2(pi)}
    static BoundaryConditions demo();
    /// {y1(0) - y1(pi), y2(0) - y2(pi)}
    static BoundaryConditions periodic();
    /// {y1(0), y2(0)}
    static BoundaryConditions initial();

    const BoundaryMatrix& matrix() const { return a_; }

private:
    BoundaryMatrix a_;
};

/// Same row space.
bool equivalent(const BoundaryConditions& a, const BoundaryConditions& b, double tol = 1e-10);

/// Reduced row echelon form with unit pivots.
BoundaryMatrix reduced_row_echelon(const BoundaryMatrix& a);

/// (U1(f), U2(f)) from spectrally extrapolated endpoint values.
std::array<Complex, 2> boundary_form(const BoundaryConditions& bc, const GridFunction2& f);

/// Conditions U* with [-i y1 conj(z1) + i y2 conj(z2)]_0^pi = 0 whenever
/// U(y) = 0 and U*(z) = 0, in reduced row echelon form.
BoundaryConditions adjoint_bc(const BoundaryConditions& bc);

/// [-i y1 conj(z1) + i y2 conj(z2)] evaluated from 0 to pi.
Complex lagrange_boundary_term(const GridFunction2& y, const GridFunction2& z);

/// U applied to the two fundamental columns, each column divided by its
/// largest endpoint modulus (at least 1).
struct ScaledBoundaryMatrix {
    Eigen::Matrix2cd m;
    std::array<double, 2> log_scale{};
};

ScaledBoundaryMatrix scaled_boundary_matrix(const BoundaryConditions& bc, const FundamentalMatrix& fm);

struct CharDet {
    LogComplex value;        ///< det[U_i(Y^{[k]})] / det Y(0)
    double mantissa = 0.0;   ///< |det| of the scaled matrix over the row norms of a
    HalfPlane plane = HalfPlane::upper;
};

struct CharDetOptions {
    GridPtr grid;  ///< sized from lambda when empty
    SolverOptions solver{};
    std::optional<HalfPlane> plane;  ///< natural plane when empty
};

/// Characteristic determinant. Without a forced plane, a singular anchor in
/// the natural half-plane falls back to the other one.
CharDet char_det(const BoundaryConditions& bc, const Potential& v, Complex lambda, const CharDetOptions& options = {});

}  // namespace dirac
