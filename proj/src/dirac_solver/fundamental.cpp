#include "dirac/dirac_solver/fundamental.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dirac/dirac_solver/volterra.hpp"
#include "dirac/errors.hpp"
#include "dirac/parallel.hpp"

namespace dirac {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kSingularAnchor = 1e-12;

struct ColumnIterate {
    std::vector<Complex> u;  // diagonal remainder (plain integral)
    std::vector<Complex> v;  // off-diagonal remainder (exponential kernel)
    Complex u_edge{};        // value at the far end of the sweep
    Complex v_edge{};
    int iterations = 0;
    double last_update = 0.0;
    std::vector<double> history;
};

// v = K_kappa[fv (1 + u)],  u = K_0[fu v], swept forward from 0 or backward from pi.
ColumnIterate picard_column(bool forward, const ExpKernelIntegrator& kernel, const ExpKernelIntegrator& plain,
                            std::span<const Complex> fv, std::span<const Complex> fu, const SolverOptions& options,
                            const char* label) {
    const std::size_t n = fv.size();
    ColumnIterate it;
    it.u.assign(n, Complex{});
    it.v.assign(n, Complex{});
    std::vector<Complex> src(n);
    std::vector<Complex> u_new(n);
    std::vector<Complex> v_new(n);
    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        for (std::size_t i = 0; i < n; ++i) src[i] = fv[i] * (1.0 + it.u[i]);
        const Complex v_edge = forward ? kernel.forward(src, v_new) : kernel.backward(src, v_new);
        for (std::size_t i = 0; i < n; ++i) src[i] = fu[i] * v_new[i];
        const Complex u_edge = forward ? plain.forward(src, u_new) : plain.backward(src, u_new);

        double update = std::max(std::abs(v_edge - it.v_edge), std::abs(u_edge - it.u_edge));
        for (std::size_t i = 0; i < n; ++i) {
            update = std::max({update, std::abs(v_new[i] - it.v[i]), std::abs(u_new[i] - it.u[i])});
        }
        it.u.swap(u_new);
        it.v.swap(v_new);
        it.u_edge = u_edge;
        it.v_edge = v_edge;
        it.iterations = iter;
        it.last_update = update;
        it.history.push_back(update);
        if (!std::isfinite(update)) break;
        if (update < options.tolerance) return it;
    }
    std::ostringstream msg;
    msg << "Picard iteration for " << label << " did not converge after " << it.iterations
        << " iterations (last update " << it.last_update << ")";
    throw DivergenceError(msg.str(), it.last_update);
}

double l1(std::span<const Complex> f, std::span<const double> w) {
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * std::abs(f[i]);
    return acc;
}

}  // namespace

FundamentalMatrix::FundamentalMatrix(SpectralParameter lambda, SystemKind system, GridPtr grid,
                                     std::array<std::vector<Complex>, 4> remainders, std::array<Complex, 4> at_left,
                                     std::array<Complex, 4> at_right)
    : lambda_(lambda),
      system_(system),
      grid_(std::move(grid)),
      b_(std::move(remainders)),
      left_(at_left),
      right_(at_right) {}

Complex FundamentalMatrix::phase_parameter() const {
    return system_ == SystemKind::direct ? lambda_.lambda() : std::conj(lambda_.lambda());
}

HalfPlane FundamentalMatrix::anchor_plane() const {
    return system_ == SystemKind::direct ? lambda_.half_plane() : lambda_.conjugate().half_plane();
}

Complex FundamentalMatrix::phase_exponent(int k) const {
    return (k == 0 ? kI : -kI) * phase_parameter();
}

double FundamentalMatrix::column_log_scale(int k) const {
    return std::max(0.0, phase_exponent(k).real() * std::numbers::pi);
}

GridFunction2 FundamentalMatrix::column(int k) const {
    const Complex omega = phase_exponent(k);
    const double scale = column_log_scale(k);
    const auto x = grid_->nodes();
    std::vector<Complex> first(x.size());
    std::vector<Complex> second(x.size());
    const auto& top = b_[index(0, k)];
    const auto& bottom = b_[index(1, k)];
    const Complex d0 = k == 0 ? 1.0 : 0.0;
    const Complex d1 = k == 1 ? 1.0 : 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Complex e = std::exp(omega * x[i] - scale);
        first[i] = (d0 + top[i]) * e;
        second[i] = (d1 + bottom[i]) * e;
    }
    return GridFunction2(grid_, std::move(first), std::move(second), scale);
}

std::array<LogComplex, 4> FundamentalMatrix::column_endpoints(int k) const {
    const Complex d0 = k == 0 ? 1.0 : 0.0;
    const Complex d1 = k == 1 ? 1.0 : 0.0;
    const LogComplex at_pi = LogComplex::exp(phase_exponent(k) * std::numbers::pi);
    return {LogComplex::from_complex(d0 + left_[index(0, k)]), LogComplex::from_complex(d1 + left_[index(1, k)]),
            LogComplex::from_complex(d0 + right_[index(0, k)]) * at_pi,
            LogComplex::from_complex(d1 + right_[index(1, k)]) * at_pi};
}

LogComplex FundamentalMatrix::entry(int j, int k, std::size_t node) const {
    const Complex delta = j == k ? 1.0 : 0.0;
    return LogComplex::from_complex(delta + b_[index(j, k)][node]) *
           LogComplex::exp(phase_exponent(k) * grid_->nodes()[node]);
}

Complex FundamentalMatrix::dephased_det(std::size_t i) const {
    return (1.0 + b_[0][i]) * (1.0 + b_[3][i]) - b_[1][i] * b_[2][i];
}

Complex FundamentalMatrix::dephased_det_at_left() const {
    return (1.0 + left_[0]) * (1.0 + left_[3]) - left_[1] * left_[2];
}

FundamentalSolution solve_fundamental(const Potential& v, const SpectralParameter& lambda, SystemKind system,
                                      const GridPtr& grid, const SolverOptions& options) {
    if (!(options.tolerance > 0.0)) throw std::invalid_argument("solve_fundamental: tolerance must be positive");
    const SpectralParameter effective = system == SystemKind::direct ? lambda : lambda.conjugate();
    const Potential& pot_ref = v;
    const Potential adj = system == SystemKind::direct ? Potential{} : adjoint_potential(v);
    const Potential& pot = system == SystemKind::direct ? pot_ref : adj;

    const Complex mu = effective.lambda();
    const auto x = grid->nodes();
    const std::size_t n = x.size();
    std::vector<Complex> p(n);
    std::vector<Complex> q(n);
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = pot.p(x[i]);
        q[i] = pot.q(x[i]);
    }
    auto scaled = [n](const std::vector<Complex>& f, Complex c) {
        std::vector<Complex> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = c * f[i];
        return out;
    };

    const ExpKernelIntegrator plain(*grid, 0.0);
    std::array<std::vector<Complex>, 4> b;
    std::array<Complex, 4> left{};
    std::array<Complex, 4> right{};
    PicardReport report;

    auto renormalize = [&](ColumnIterate& col, std::size_t diag, std::size_t off) {
        const Complex norm = 1.0 + col.u_edge;
        if (std::abs(norm) < kSingularAnchor) {
            throw DomainError("fundamental matrix anchors are singular at this spectral parameter");
        }
        b[diag].resize(n);
        b[off].resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            b[diag][i] = (col.u[i] - col.u_edge) / norm;
            b[off][i] = col.v[i] / norm;
        }
        left[diag] = 0.0;
        left[off] = col.v_edge / norm;
        right[diag] = -col.u_edge / norm;
        right[off] = 0.0;
    };
    auto assign_forward = [&](ColumnIterate& col, std::size_t diag, std::size_t off) {
        b[diag] = std::move(col.u);
        b[off] = std::move(col.v);
        left[diag] = 0.0;
        left[off] = 0.0;
        right[diag] = col.u_edge;
        right[off] = col.v_edge;
    };

    // index layout: 0 = b11, 1 = b12, 2 = b21, 3 = b22
    ColumnIterate first;
    ColumnIterate second;
    if (effective.half_plane() == HalfPlane::upper) {
        const ExpKernelIntegrator kernel(*grid, 2.0 * kI * mu);
        second = picard_column(true, kernel, plain, scaled(p, -kI), scaled(q, kI), options, "column 2");
        first = picard_column(false, kernel, plain, scaled(q, -kI), scaled(p, kI), options, "column 1");
        report.iterations = std::max(first.iterations, second.iterations);
        report.final_update_sup = std::max(first.last_update, second.last_update);
        report.update_history = {first.history, second.history};
        assign_forward(second, 3, 1);
        renormalize(first, 0, 2);
    } else {
        const ExpKernelIntegrator kernel(*grid, -2.0 * kI * mu);
        first = picard_column(true, kernel, plain, scaled(q, kI), scaled(p, -kI), options, "column 1");
        second = picard_column(false, kernel, plain, scaled(p, kI), scaled(q, -kI), options, "column 2");
        report.iterations = std::max(first.iterations, second.iterations);
        report.final_update_sup = std::max(first.last_update, second.last_update);
        report.update_history = {first.history, second.history};
        assign_forward(first, 0, 2);
        renormalize(second, 3, 1);
    }

    FundamentalMatrix fm(lambda, system, grid, std::move(b), left, right);

    const auto w = grid->weights();
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            const auto r = fm.remainder(j, k);
            for (const auto& val : r) report.remainder_sup = std::max(report.remainder_sup, std::abs(val));
            report.remainder_sup = std::max({report.remainder_sup, std::abs(fm.remainder_at_left(j, k)),
                                             std::abs(fm.remainder_at_right(j, k))});
        }
    }
    for (int k = 0; k < 2; ++k) {
        const auto top = fm.remainder(0, k);
        const auto bottom = fm.remainder(1, k);
        const GridFunction2 pair(grid, std::vector<Complex>(top.begin(), top.end()),
                                 std::vector<Complex>(bottom.begin(), bottom.end()));
        const GridFunction2 d = derivative(pair);
        report.remainder_w11 = std::max({report.remainder_w11, l1(pair.first(), w) + l1(d.first(), w),
                                         l1(pair.second(), w) + l1(d.second(), w)});
    }
    const Complex d0 = fm.dephased_det_at_left();
    const Complex d_right = (1.0 + right[0]) * (1.0 + right[3]) - right[1] * right[2];
    double dev = std::abs(d_right - d0);
    for (std::size_t i = 0; i < n; ++i) dev = std::max(dev, std::abs(fm.dephased_det(i) - d0));
    report.liouville_deviation = dev / std::abs(d0);

    return {std::move(fm), std::move(report)};
}

double ode_residual(const GridFunction2& f, const Potential& v, Complex lambda) {
    const GridFunction2 d = derivative(f);
    const auto x = f.grid()->nodes();
    double res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Complex y1 = f.first()[i];
        const Complex y2 = f.second()[i];
        const Complex r1 = -kI * d.first()[i] + v.p(x[i]) * y2 - lambda * y1;
        const Complex r2 = kI * d.second()[i] + v.q(x[i]) * y1 - lambda * y2;
        res = std::max({res, std::abs(r1), std::abs(r2)});
    }
    const double scale = sup_stored(f);
    return scale > 0.0 ? res / scale : res;
}

DecayScan remainder_decay_scan(const Potential& v, std::span<const double> sigmas, double tau,
                               std::size_t nodes_per_panel, const SolverOptions& options, unsigned threads) {
    if (sigmas.size() < 2) throw std::invalid_argument("remainder_decay_scan needs at least two sigma values");
    DecayScan scan;
    scan.rows = parallel_map(sigmas.size(), threads, [&](std::size_t i) {
        const Complex lambda(sigmas[i], tau);
        const auto grid = Grid::for_spectral_bound(lambda.real(), lambda.imag(), nodes_per_panel);
        const auto sol = solve_fundamental(v, SpectralParameter::natural(lambda), SystemKind::direct, grid, options);
        return DecayRow{lambda.real(), tau, std::abs(lambda), sol.report.remainder_sup, sol.report.remainder_w11};
    });
    std::stable_sort(scan.rows.begin(), scan.rows.end(),
                     [](const DecayRow& a, const DecayRow& b) { return a.abs_lambda < b.abs_lambda; });
    for (std::size_t i = 0; i < scan.rows.size(); ++i) {
        scan.w11_bound = std::max(scan.w11_bound, scan.rows[i].remainder_w11);
        if (i > 0 && scan.rows[i].remainder_sup > 1.2 * scan.rows[i - 1].remainder_sup + 1e-14) {
            scan.non_increasing = false;
        }
    }
    return scan;
}

}  // namespace dirac
