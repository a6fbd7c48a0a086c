#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dirac/bvp/boundary.hpp"
#include "dirac/bvp/spectrum.hpp"
#include "dirac/dirac_solver/oracle.hpp"
#include "dirac/errors.hpp"

using namespace dirac;
using std::numbers::pi;

namespace {

const Complex I(0, 1);
const double kLn2Pi = std::log(2.0) / pi;

BoundaryMatrix rows(std::initializer_list<std::initializer_list<double>> r) {
    BoundaryMatrix a = BoundaryMatrix::Zero();
    int i = 0;
    for (const auto& row : r) {
        int j = 0;
        for (double v : row) a(i, j++) = v;
        ++i;
    }
    return a;
}

}  // namespace

TEST_SUITE("bvp") {

TEST_CASE("boundary forms") {
    const auto g = std::make_shared<const Grid>(64);
    const auto ones = GridFunction2::sample(g, [](double) { return Complex(1); }, [](double) { return Complex(1); });
    const auto u = boundary_form(BoundaryConditions::initial(), ones);
    CHECK(std::abs(u[0] - 1.0) < 1e-13);
    CHECK(std::abs(u[1] - 1.0) < 1e-13);

    const Complex lam(1.5, 0.7);
    const auto f = GridFunction2::sample(g, [](double) { return Complex(0); }, [&](double x) { return std::exp(-I * lam * x); });
    const auto d = boundary_form(BoundaryConditions::demo(), f);
    CHECK(std::abs(d[1] - (1.0 - 2.0 * std::exp(-I * lam * pi))) < 1e-12);
    const auto z = boundary_form(BoundaryConditions::periodic(), GridFunction2::zeros(g));
    CHECK(std::abs(z[0]) + std::abs(z[1]) == 0.0);
}

TEST_CASE("rank-deficient conditions are rejected") {
    CHECK_THROWS_AS(BoundaryConditions(rows({{1, 0, 0, 0}, {2, 0, 0, 0}})), InputError);
}

TEST_CASE("characteristic determinant closed forms") {
    for (Complex lam : {Complex(0.3, 0.4), Complex(-2.2, -1.1), Complex(3.7, 1.9)}) {
        const auto d = char_det(BoundaryConditions::demo(), Potential::zero(), lam);
        CHECK(std::abs(d.value.to_complex() - (1.0 - 2.0 * std::exp(-I * lam * pi))) < 1e-11);
        const auto p = char_det(BoundaryConditions::periodic(), Potential::zero(), lam);
        const Complex expect = (1.0 - std::exp(I * lam * pi)) * (1.0 - std::exp(-I * lam * pi));
        CHECK(std::abs(p.value.to_complex() - expect) < 1e-11);
    }
    for (int n = -2; n <= 2; ++n) {
        const auto d = char_det(BoundaryConditions::demo(), Potential::zero(), Complex(2 * n, -kLn2Pi));
        CHECK(std::abs(d.value.to_complex()) < 1e-13);
        CHECK(d.mantissa < 1e-13);
    }
}

TEST_CASE("adjoint boundary conditions") {
    CHECK(equivalent(adjoint_bc(BoundaryConditions::demo()), BoundaryConditions(rows({{0, 0, 1, 0}, {0, -2, 0, 1}}))));
    CHECK(equivalent(adjoint_bc(BoundaryConditions::periodic()), BoundaryConditions::periodic()));
    CHECK(equivalent(adjoint_bc(BoundaryConditions::initial()), BoundaryConditions(rows({{0, 0, 1, 0}, {0, 0, 0, 1}}))));
    const auto bc = BoundaryConditions(rows({{1, 2, 0, -1}, {0, 1, 3, 1}}));
    CHECK(equivalent(adjoint_bc(adjoint_bc(bc)), bc));
}

TEST_CASE("lagrange identity on random admissible pairs") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    auto rnd = [&] { return Complex(u(rng), u(rng)); };
    BoundaryMatrix a;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 4; ++j) a(i, j) = rnd();
    const BoundaryConditions bc(a);
    const auto adj = adjoint_bc(bc);
    auto kernel = [](const BoundaryMatrix& m) {
        Eigen::Matrix4cd full = Eigen::Matrix4cd::Zero();
        full.topRows(2) = m;
        Eigen::JacobiSVD<Eigen::Matrix4cd> s(full, Eigen::ComputeFullV);
        return Eigen::Matrix<Complex, 4, 2>(s.matrixV().rightCols(2));
    };
    const auto ky = kernel(bc.matrix());
    const auto kz = kernel(adj.matrix());
    const auto g = std::make_shared<const Grid>(64);
    auto linear = [&](const Eigen::Vector4cd& e) {
        return GridFunction2::sample(
            g, [&](double x) { return e(0) + (e(2) - e(0)) * x / pi + 0.3 * std::sin(x); },
            [&](double x) { return e(1) + (e(3) - e(1)) * x / pi; });
    };
    double worst = 0;
    for (int k = 0; k < 50; ++k) {
        const Eigen::Vector4cd ey = ky * Eigen::Vector2cd(rnd(), rnd());
        const Eigen::Vector4cd ez = kz * Eigen::Vector2cd(rnd(), rnd());
        worst = std::max(worst, std::abs(lagrange_boundary_term(linear(ey), linear(ez))));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("demo spectrum") {
    const auto rep = find_eigenvalues(BoundaryConditions::demo(), Potential::zero(), {-5, 5, -2, 2});
    REQUIRE(rep.records.size() == 5);
    CHECK(rep.winding_total == 5);
    for (int n = -2; n <= 2; ++n) {
        const auto& r = rep.records[static_cast<std::size_t>(n + 2)];
        CHECK(std::abs(r.lambda - Complex(2 * n, -kLn2Pi)) < 1e-8);
        CHECK(r.multiplicity == 1);
        CHECK(r.biorthogonal);
        CHECK(r.boundary_residual < 1e-8);
    }
}

TEST_CASE("eigenfunction at the demo root") {
    const Complex lam(0, -kLn2Pi);
    const auto y = eigenfunction(BoundaryConditions::demo(), Potential::zero(), lam);
    const auto x = y.grid()->nodes();
    const Complex c = y.second()[0] / std::exp(-I * lam * x[0]);
    double err = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        err = std::max({err, std::abs(y.first()[i]), std::abs(y.second()[i] - c * std::exp(-I * lam * x[i]))});
    }
    CHECK(err < 1e-10);
}

TEST_CASE("raw pairing at the demo root") {
    const Complex lam(0, -kLn2Pi);
    const auto g = Grid::for_spectral_bound(5, 2);
    const auto y = GridFunction2::sample(g, [](double) { return Complex(0); }, [&](double x) { return std::exp(-I * lam * x); });
    const auto z =
        GridFunction2::sample(g, [](double) { return Complex(0); }, [&](double x) { return std::exp(-I * std::conj(lam) * x); });
    CHECK(std::abs(inner_product(y, z) - pi) < 1e-12);
    const auto rec = biorthogonal_pair(y, BoundaryConditions::demo(), Potential::zero(), lam);
    CHECK(rec.biorthogonal);
    CHECK(std::abs(inner_product(*rec.y, *rec.z) - 1.0) < 1e-12);
}

TEST_CASE("periodic spectrum is double") {
    const auto rep = find_eigenvalues(BoundaryConditions::periodic(), Potential::zero(), {-5, 5, -1, 1});
    REQUIRE(rep.records.size() == 5);
    CHECK(rep.winding_total == 10);
    for (int n = -2; n <= 2; ++n) {
        const auto& r = rep.records[static_cast<std::size_t>(n + 2)];
        CHECK(r.multiplicity == 2);
        CHECK(std::abs(r.lambda - Complex(2 * n, 0)) < 1e-5);
        CHECK(r.associated_suspected);
        CHECK_FALSE(r.y.has_value());
    }
    CHECK_THROWS_AS(eigenfunction(BoundaryConditions::periodic(), Potential::zero(), 2.0, 2), DegenerateEigenvalueError);
}

TEST_CASE("zero-free region") {
    const auto rep = find_eigenvalues(BoundaryConditions::demo(), Potential::zero(), {0.5, 1.5, 0.5, 1.5});
    CHECK(rep.records.empty());
    CHECK(rep.winding_total == 0);
}

TEST_CASE("constant potential spectrum satisfies the boundary conditions") {
    const auto rep = find_eigenvalues(BoundaryConditions::demo(), Potential::constant(1.0, 1.0), {-3, 3, -2, 2});
    int total = 0;
    for (const auto& r : rep.records) {
        total += r.multiplicity;
        CHECK(r.boundary_residual < 1e-8);
        CHECK(r.ode_residual < 1e-6);
        // Delta vanishes for the closed-form propagator too
        const auto m = constant_propagator(1.0, 1.0, r.lambda, pi);
        // y(0) = (0, 1): y2(0) - 2 y2(pi) = 1 - 2 m[1][1]
        CHECK(std::abs(1.0 - 2.0 * m[1][1]) < 1e-8);
    }
    CHECK(total == rep.winding_total);
}

}
