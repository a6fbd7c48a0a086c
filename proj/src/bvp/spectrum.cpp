#include "dirac/bvp/spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "dirac/errors.hpp"

namespace dirac {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};
constexpr double kNearZero = 1e-6;        // relative to the contour median
constexpr double kMaxIncrement = kPi / 2;
constexpr int kMaxBisection = 40;
constexpr int kMaxDilations = 5;
constexpr std::array<double, 5> kSplitFractions{0.5, 0.4637, 0.5391, 0.4213, 0.5823};

struct ContourResult {
    int winding = 0;
    bool hit_zero = false;
};

struct RefineResult {
    Complex z;
    double mantissa = 0.0;
    bool converged = false;
};

class Searcher {
public:
    Searcher(const BoundaryConditions& bc, const Potential& v, GridPtr grid, const SearchOptions& opts)
        : bc_(bc), v_(v), grid_(std::move(grid)), opts_(opts) {}

    int evaluations() const { return evaluations_; }
    std::vector<EigenRecord>& records() { return records_; }

    const CharDet& eval(Complex z) {
        const auto key = std::make_pair(z.real(), z.imag());
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        ++evaluations_;
        CharDetOptions o;
        o.grid = grid_;
        o.solver = opts_.solver;
        return memo_.emplace(key, char_det(bc_, v_, z, o)).first->second;
    }

    ContourResult contour(const Rectangle& r) {
        const std::array<Complex, 4> corners{Complex(r.re_min, r.im_min), Complex(r.re_max, r.im_min),
                                             Complex(r.re_max, r.im_max), Complex(r.re_min, r.im_max)};
        std::vector<Complex> pts;
        for (int e = 0; e < 4; ++e) {
            auto edge = edge_points(corners[e], corners[(e + 1) % 4]);
            pts.insert(pts.end(), edge.begin(), edge.end() - 1);
        }
        std::vector<double> mags;
        mags.reserve(pts.size());
        for (const auto& p : pts) mags.push_back(eval(p).mantissa);
        std::vector<double> sorted = mags;
        std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
        const double floor = kNearZero * sorted[sorted.size() / 2];

        ContourResult res;
        for (double m : mags) {
            if (!(m > floor)) res.hit_zero = true;
        }
        if (res.hit_zero) return res;

        double total = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            total += increment(pts[i], pts[(i + 1) % pts.size()], floor, 0, res.hit_zero);
            if (res.hit_zero) return res;
        }
        const double w = total / (2.0 * kPi);
        const double rounded = std::round(w);
        if (std::abs(w - rounded) > 0.2) {
            std::ostringstream msg;
            msg << "non-integer winding " << w << " on contour; refine the grid";
            throw ContourError(msg.str());
        }
        res.winding = static_cast<int>(rounded);
        return res;
    }

    void search(const Rectangle& r, int w) {
        if (w <= 0) return;
        const bool small = std::max(r.width(), r.height()) <= opts_.min_cell;
        if (w == 1 || small) {
            const auto ref = refine(r, w);
            if (ref.converged || small) {
                add_record(ref, r, w);
                return;
            }
        } else if (try_cluster(r, w)) {
            return;
        }
        split(r, w);
    }

private:
    std::vector<Complex> edge_points(Complex a, Complex b) {
        const bool flip = std::make_pair(b.real(), b.imag()) < std::make_pair(a.real(), a.imag());
        const Complex from = flip ? b : a;
        const Complex to = flip ? a : b;
        const auto n = static_cast<std::size_t>(std::max(4.0, std::ceil(4.0 * std::abs(to - from))));
        std::vector<Complex> pts(n + 1);
        for (std::size_t k = 0; k <= n; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(n);
            pts[k] = k == n ? to : from + (to - from) * t;
        }
        if (flip) std::reverse(pts.begin(), pts.end());
        return pts;
    }

    double increment(Complex a, Complex b, double floor, int depth, bool& hit_zero) {
        const double d = std::arg(eval(b).value.phase() / eval(a).value.phase());
        if (std::abs(d) < kMaxIncrement) return d;
        if (depth >= kMaxBisection) throw ContourError("phase increments did not resolve; refine the grid");
        const Complex m = 0.5 * (a + b);
        if (!(eval(m).mantissa > floor)) {
            hit_zero = true;
            return 0.0;
        }
        const double left = increment(a, m, floor, depth + 1, hit_zero);
        if (hit_zero) return 0.0;
        return left + increment(m, b, floor, depth + 1, hit_zero);
    }

    // Delta times e^{+-i lambda pi}: entire, zero set unchanged, O(1) in the cell.
    Complex dephased(Complex z, bool upper) {
        const auto& d = eval(z);
        const Complex phase = upper ? kI * z * kPi : -kI * z * kPi;
        return (d.value * LogComplex::exp(phase)).to_complex();
    }

    RefineResult refine(const Rectangle& r, int multiplicity) {
        const bool upper = r.center().imag() >= 0.0;
        const double slack = 1e-9 * std::max(1.0, std::abs(r.center()));
        Complex z0 = r.center();
        Complex z1 = z0 + 0.05 * Complex(r.width(), r.height()) / 2.0;
        Complex f0 = dephased(z0, upper);
        Complex f1 = dephased(z1, upper);
        RefineResult res{z1, eval(z1).mantissa, false};
        if (eval(z0).mantissa < res.mantissa) res = {z0, eval(z0).mantissa, false};
        const auto m = static_cast<double>(multiplicity);
        for (int it = 0; it < 100 && res.mantissa >= opts_.tolerance; ++it) {
            const Complex df = f1 - f0;
            if (df == Complex{}) break;
            const Complex z2 = z1 - m * f1 * (z1 - z0) / df;
            if (!std::isfinite(z2.real()) || !std::isfinite(z2.imag()) || !r.contains(z2, slack)) {
                return res;
            }
            const bool stalled = std::abs(z2 - z1) <= 4e-16 * std::max(1.0, std::abs(z2));
            z0 = z1;
            f0 = f1;
            z1 = z2;
            f1 = dephased(z1, upper);
            const double mant = eval(z1).mantissa;
            if (mant <= res.mantissa) res = {z1, mant, false};
            if (stalled) break;
        }
        res.converged = res.mantissa < opts_.tolerance && r.contains(res.z, slack);
        return res;
    }

    bool try_cluster(const Rectangle& r, int w) {
        const auto ref = refine(r, w);
        if (!ref.converged) return false;
        const double h = opts_.min_cell / 2.0;
        const Rectangle cell{ref.z.real() - h, ref.z.real() + h, ref.z.imag() - h, ref.z.imag() + h};
        if (cell.re_min < r.re_min || cell.re_max > r.re_max || cell.im_min < r.im_min || cell.im_max > r.im_max) {
            return false;
        }
        const auto c = contour(cell);
        if (c.hit_zero || c.winding != w) return false;
        add_record(ref, cell, w);
        return true;
    }

    void split(const Rectangle& r, int w) {
        for (double f : kSplitFractions) {
            const double xs = r.re_min + f * r.width();
            const double ys = r.im_min + f * r.height();
            const std::array<Rectangle, 4> kids{Rectangle{r.re_min, xs, r.im_min, ys}, Rectangle{xs, r.re_max, r.im_min, ys},
                                                Rectangle{r.re_min, xs, ys, r.im_max}, Rectangle{xs, r.re_max, ys, r.im_max}};
            std::array<int, 4> counts{};
            bool ok = true;
            int sum = 0;
            for (int k = 0; k < 4 && ok; ++k) {
                const auto c = contour(kids[k]);
                ok = !c.hit_zero;
                counts[k] = c.winding;
                sum += c.winding;
            }
            if (!ok || sum != w) continue;
            for (int k = 0; k < 4; ++k) search(kids[k], counts[k]);
            return;
        }
        throw ContourError("winding counts of sub-cells do not add up; refine the grid");
    }

    void add_record(const RefineResult& ref, const Rectangle& cell, int w) {
        auto& rec = records_.emplace_back();
        rec.lambda = ref.z;
        rec.multiplicity = w;
        rec.cell = cell;
        rec.mantissa = ref.mantissa;
        rec.refined = ref.mantissa < opts_.tolerance;
    }

    const BoundaryConditions& bc_;
    const Potential& v_;
    GridPtr grid_;
    SearchOptions opts_;
    std::map<std::pair<double, double>, CharDet> memo_;
    int evaluations_ = 0;
    std::vector<EigenRecord> records_;
};

GridPtr grid_for_region(const Rectangle& r, std::size_t npp) {
    const double re = std::max(std::abs(r.re_min), std::abs(r.re_max));
    const double im = std::max(std::abs(r.im_min), std::abs(r.im_max));
    return Grid::for_spectral_bound(1.06 * re, 1.06 * im, npp);
}

void check_region(const Rectangle& r) {
    if (!(r.re_max > r.re_min) || !(r.im_max > r.im_min)) throw InputError("search rectangle is empty");
}

LogComplex log_phase_of_largest(const GridFunction2& f) {
    Complex best{};
    for (const auto* comp : {&f.first(), &f.second()}) {
        for (const auto& c : *comp) {
            if (std::abs(c) > std::abs(best)) best = c;
        }
    }
    return best == Complex{} ? LogComplex::from_complex(1.0) : LogComplex::from_complex(std::conj(best) / std::abs(best));
}

}  // namespace

Rectangle Rectangle::dilated(double factor) const {
    const Complex c = center();
    const double hw = width() * factor / 2;
    const double hh = height() * factor / 2;
    return {c.real() - hw, c.real() + hw, c.imag() - hh, c.imag() + hh};
}

int winding_number(const BoundaryConditions& bc, const Potential& v, const Rectangle& rect,
                   const SearchOptions& options) {
    check_region(rect);
    Searcher s(bc, v, grid_for_region(rect, options.nodes_per_panel), options);
    const auto c = s.contour(rect);
    if (c.hit_zero) throw ContourError("contour passes through a zero of the characteristic determinant");
    return c.winding;
}

GridFunction2 null_combination(const BoundaryConditions& bc, const Potential& v, Complex lambda, const GridPtr& grid,
                               const SolverOptions& solver) {
    const GridPtr g = grid ? grid : Grid::for_spectral_bound(lambda.real(), lambda.imag());
    const auto param = SpectralParameter::natural(lambda);
    std::optional<FundamentalSolution> sol;
    try {
        sol.emplace(solve_fundamental(v, param, SystemKind::direct, g, solver));
    } catch (const DomainError&) {
        if (std::abs(lambda.imag()) >= kHalfPlaneMargin) throw;
        const HalfPlane other = param.half_plane() == HalfPlane::upper ? HalfPlane::lower : HalfPlane::upper;
        sol.emplace(solve_fundamental(v, SpectralParameter(lambda, other), SystemKind::direct, g, solver));
    }
    const auto sm = scaled_boundary_matrix(bc, sol->matrix);
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(sm.m, Eigen::ComputeFullV);
    if (svd.singularValues()(0) <= 1e-6 * bc.matrix().norm()) {
        throw DegenerateEigenvalueError("boundary matrix vanishes: eigenvalue is geometrically multiple");
    }
    // null vector of the scaled matrix, mapped back to coefficients of Y1, Y2
    const Eigen::Vector2cd c = svd.matrixV().col(1);
    std::array<LogComplex, 2> coef{LogComplex::from_complex(c(0)) * LogComplex::exp(-sm.log_scale[0]),
                                   LogComplex::from_complex(c(1)) * LogComplex::exp(-sm.log_scale[1])};
    const LogMagnitude size = (coef[0].magnitude() * coef[0].magnitude() + coef[1].magnitude() * coef[1].magnitude()).sqrt();
    const int big = coef[0].magnitude() >= coef[1].magnitude() ? 0 : 1;
    const LogComplex fix = LogComplex::from_complex(std::conj(coef[big].phase())) * LogComplex::exp(-size.log());
    return linear_combination(coef[0] * fix, sol->matrix.column(0), coef[1] * fix, sol->matrix.column(1));
}

GridFunction2 eigenfunction(const BoundaryConditions& bc, const Potential& v, Complex lambda, int multiplicity,
                            const GridPtr& grid, const SolverOptions& solver) {
    if (multiplicity > 1) {
        throw DegenerateEigenvalueError("eigenvalue has multiplicity > 1; associated functions are not constructed");
    }
    GridFunction2 f = null_combination(bc, v, lambda, grid, solver);
    const LogMagnitude n = h_norm(f);
    f = f.times(LogComplex::exp(-n.log()));
    f = f.times(log_phase_of_largest(f));
    return f.materialized();
}

EigenRecord biorthogonal_pair(const GridFunction2& y, const BoundaryConditions& bc, const Potential& v,
                              Complex lambda, const SolverOptions& solver) {
    GridFunction2 z = null_combination(adjoint_bc(bc), adjoint_potential(v), std::conj(lambda), y.grid(), solver);
    const LogComplex pairing = log_inner_product(y, z);
    const LogMagnitude scale = h_norm(y) * h_norm(z);
    if (pairing.is_zero() || pairing.magnitude() < LogMagnitude::from_linear(1e-10) * scale) {
        throw PairingError("eigenfunction and adjoint eigenfunction are nearly orthogonal; "
                           "associated functions may be present");
    }
    z = z.times(LogComplex::from_complex(1.0) / pairing.conj());
    if (h_norm(z).log() < 600.0) z = z.materialized();
    EigenRecord rec;
    rec.lambda = lambda;
    rec.y = y;
    rec.z = std::move(z);
    rec.biorthogonal = true;
    rec.pairing_value = pairing.to_complex();
    return rec;
}

SpectrumReport find_eigenvalues(const BoundaryConditions& bc, const Potential& v, const Rectangle& region,
                                const SearchOptions& options) {
    check_region(region);
    const GridPtr grid = grid_for_region(region, options.nodes_per_panel);
    Searcher s(bc, v, grid, options);
    SpectrumReport report;
    Rectangle r = region;
    ContourResult top;
    for (int attempt = 0;; ++attempt) {
        top = s.contour(r);
        if (!top.hit_zero) break;
        if (attempt >= kMaxDilations) throw ContourError("search contour keeps passing through zeros");
        r = r.dilated(1.01);
        ++report.nudges;
    }
    report.region = r;
    report.winding_total = top.winding;
    s.search(r, top.winding);
    report.records = std::move(s.records());
    report.determinant_evaluations = s.evaluations();
    std::sort(report.records.begin(), report.records.end(), [](const EigenRecord& a, const EigenRecord& b) {
        return std::make_pair(a.lambda.real(), a.lambda.imag()) < std::make_pair(b.lambda.real(), b.lambda.imag());
    });

    int total = 0;
    for (auto& rec : report.records) {
        total += rec.multiplicity;
        report.max_im = std::max(report.max_im, std::abs(rec.lambda.imag()));
        if (!options.build_functions) continue;
        if (rec.multiplicity > 1) {
            rec.associated_suspected = true;
            rec.note = "multiple eigenvalue; associated functions not constructed";
            continue;
        }
        try {
            GridFunction2 y = eigenfunction(bc, v, rec.lambda, 1, grid, options.solver);
            rec.ode_residual = ode_residual(y, v, rec.lambda);
            const auto u = boundary_form(bc, y);
            rec.boundary_residual = std::max(std::abs(u[0]), std::abs(u[1]));
            EigenRecord pair = biorthogonal_pair(y, bc, v, rec.lambda, options.solver);
            rec.y = std::move(pair.y);
            rec.z = std::move(pair.z);
            rec.biorthogonal = true;
            rec.pairing_value = pair.pairing_value;
        } catch (const DegenerateEigenvalueError& e) {
            rec.associated_suspected = true;
            rec.note = e.what();
        } catch (const PairingError& e) {
            rec.associated_suspected = true;
            rec.note = e.what();
        }
    }
    if (total != report.winding_total) {
        throw ContourError("record multiplicities do not match the winding total");
    }
    return report;
}

}  // namespace dirac
