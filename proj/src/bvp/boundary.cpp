#include "dirac/bvp/boundary.hpp"

#include <algorithm>
#include <cmath>

#include "dirac/errors.hpp"

namespace dirac {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kRankTol = 1e-10;

Eigen::Vector4cd boundary_weights() { return Eigen::Vector4cd(kI, -kI, -kI, kI); }

}  // namespace

BoundaryConditions::BoundaryConditions(const BoundaryMatrix& a) : a_(a) {
    if (!a.allFinite()) throw InputError("boundary matrix has non-finite entries");
    Eigen::JacobiSVD<BoundaryMatrix> svd(a);
    const auto s = svd.singularValues();
    if (!(s(0) > 0.0) || s(1) <= kRankTol * s(0)) throw InputError("boundary matrix must have rank 2");
}

BoundaryConditions BoundaryConditions::demo() {
    BoundaryMatrix a;
    a << 1, 0, 0, 0, 0, 1, 0, -2;
    return BoundaryConditions(a);
}

BoundaryConditions BoundaryConditions::periodic() {
    BoundaryMatrix a;
    a << 1, 0, -1, 0, 0, 1, 0, -1;
    return BoundaryConditions(a);
}

BoundaryConditions BoundaryConditions::initial() {
    BoundaryMatrix a;
    a << 1, 0, 0, 0, 0, 1, 0, 0;
    return BoundaryConditions(a);
}

bool equivalent(const BoundaryConditions& a, const BoundaryConditions& b, double tol) {
    Eigen::Matrix<Complex, 4, 4> stacked;
    stacked << a.matrix(), b.matrix();
    Eigen::JacobiSVD<Eigen::Matrix<Complex, 4, 4>> svd(stacked);
    const auto s = svd.singularValues();
    return s(2) <= tol * s(0);
}

BoundaryMatrix reduced_row_echelon(const BoundaryMatrix& in) {
    BoundaryMatrix a = in;
    int row = 0;
    for (int col = 0; col < 4 && row < 2; ++col) {
        int pivot = row;
        for (int r = row + 1; r < 2; ++r) {
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        }
        if (std::abs(a(pivot, col)) <= kRankTol * a.norm()) continue;
        a.row(row).swap(a.row(pivot));
        a.row(row) /= a(row, col);
        for (int r = 0; r < 2; ++r) {
            if (r != row) a.row(r) -= a(r, col) * a.row(row);
        }
        a(row, col) = 1.0;
        ++row;
    }
    // scrub rounding noise
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 4; ++c) {
            if (std::abs(a(r, c).real()) < 1e-15) a(r, c).real(0.0);
            if (std::abs(a(r, c).imag()) < 1e-15) a(r, c).imag(0.0);
        }
    }
    return a;
}

std::array<Complex, 2> boundary_form(const BoundaryConditions& bc, const GridFunction2& f) {
    const auto e = f.endpoint_values();
    const double s = std::exp(f.log_scale());
    std::array<Complex, 2> out{};
    for (int i = 0; i < 2; ++i) {
        for (int m = 0; m < 4; ++m) out[i] += bc.matrix()(i, m) * e[m];
        out[i] *= s;
    }
    return out;
}

BoundaryConditions adjoint_bc(const BoundaryConditions& bc) {
    Eigen::JacobiSVD<BoundaryMatrix> svd(bc.matrix(), Eigen::ComputeFullV);
    const Eigen::Matrix4cd v = svd.matrixV();
    const Eigen::Vector4cd h = boundary_weights();
    BoundaryMatrix adj;
    for (int r = 0; r < 2; ++r) {
        const Eigen::Vector4cd k = v.col(2 + r);
        adj.row(r) = h.cwiseProduct(k).conjugate().transpose();
    }
    return BoundaryConditions(reduced_row_echelon(adj));
}

Complex lagrange_boundary_term(const GridFunction2& y, const GridFunction2& z) {
    require_same_grid(y, z);
    const auto a = y.endpoint_values();
    const auto b = z.endpoint_values();
    const Complex at_pi = -kI * a[2] * std::conj(b[2]) + kI * a[3] * std::conj(b[3]);
    const Complex at_0 = -kI * a[0] * std::conj(b[0]) + kI * a[1] * std::conj(b[1]);
    return (at_pi - at_0) * std::exp(y.log_scale() + z.log_scale());
}

ScaledBoundaryMatrix scaled_boundary_matrix(const BoundaryConditions& bc, const FundamentalMatrix& fm) {
    ScaledBoundaryMatrix out;
    for (int k = 0; k < 2; ++k) {
        const auto e = fm.column_endpoints(k);
        double s = 0.0;
        for (const auto& v : e) {
            if (!v.is_zero()) s = std::max(s, v.log_abs());
        }
        out.log_scale[k] = s;
        for (int i = 0; i < 2; ++i) {
            Complex acc{};
            for (int m = 0; m < 4; ++m) acc += bc.matrix()(i, m) * e[m].scaled(s);
            out.m(i, k) = acc;
        }
    }
    return out;
}

namespace {

CharDet char_det_in_plane(const BoundaryConditions& bc, const Potential& v, Complex lambda, HalfPlane plane,
                          const GridPtr& grid, const SolverOptions& solver) {
    const auto sol = solve_fundamental(v, SpectralParameter(lambda, plane), SystemKind::direct, grid, solver);
    const auto sm = scaled_boundary_matrix(bc, sol.matrix);
    const Complex det = sm.m.determinant();
    CharDet out;
    out.plane = plane;
    out.value = LogComplex::from_complex(det) * LogComplex::exp(sm.log_scale[0] + sm.log_scale[1]) /
                LogComplex::from_complex(sol.matrix.dephased_det_at_left());
    out.mantissa = std::abs(det) / (bc.matrix().row(0).norm() * bc.matrix().row(1).norm());
    return out;
}

}  // namespace

CharDet char_det(const BoundaryConditions& bc, const Potential& v, Complex lambda, const CharDetOptions& options) {
    const GridPtr grid = options.grid ? options.grid : Grid::for_spectral_bound(lambda.real(), lambda.imag());
    if (options.plane) return char_det_in_plane(bc, v, lambda, *options.plane, grid, options.solver);
    const HalfPlane natural = SpectralParameter::natural(lambda).half_plane();
    try {
        return char_det_in_plane(bc, v, lambda, natural, grid, options.solver);
    } catch (const DomainError&) {
        const HalfPlane other = natural == HalfPlane::upper ? HalfPlane::lower : HalfPlane::upper;
        if (std::abs(lambda.imag()) >= kHalfPlaneMargin) throw;
        return char_det_in_plane(bc, v, lambda, other, grid, options.solver);
    }
}

}  // namespace dirac
