#include "dirac/asymptotics/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "dirac/errors.hpp"
#include "dirac/parallel.hpp"

namespace dirac {

namespace {

constexpr double kPi = std::numbers::pi;

// Box-Muller on mt19937_64 output; std::normal_distribution differs between
// standard libraries.
class PortableNormal {
public:
    explicit PortableNormal(std::uint64_t seed) : engine_(seed) {}

    double operator()() {
        if (cached_) {
            cached_ = false;
            return spare_;
        }
        constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
        double u1;
        do {
            u1 = static_cast<double>(engine_() >> 11) * scale;
        } while (u1 <= 0.0);
        const double u2 = static_cast<double>(engine_() >> 11) * scale;
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * kPi * u2);
        cached_ = true;
        return r * std::cos(2.0 * kPi * u2);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool cached_ = false;
};

std::pair<Complex, Complex> unit_pair(PortableNormal& normal) {
    for (;;) {
        const Complex a(normal(), normal());
        const Complex b(normal(), normal());
        const double n = std::sqrt(std::norm(a) + std::norm(b));
        if (n > 1e-12) return {a / n, b / n};
    }
}

LogMagnitude abs_log(Complex c) { return LogMagnitude::from_linear(std::abs(c)); }

SandwichReport make_report(std::string name, std::span<const LadderPoint> ladder, auto&& log_ratio) {
    SandwichReport r;
    r.quantity = std::move(name);
    for (const auto& pt : ladder) {
        r.lambdas.push_back(pt.lambda);
        r.ratios.push_back(std::exp(log_ratio(pt)));
    }
    if (!r.ratios.empty()) {
        const auto [lo, hi] = std::minmax_element(r.ratios.begin(), r.ratios.end());
        r.lower_ratio = *lo;
        r.upper_ratio = *hi;
    }
    return r;
}

void finish_sample_report(SandwichReport& r) {
    if (r.ratios.empty()) return;
    const auto [lo, hi] = std::minmax_element(r.ratios.begin(), r.ratios.end());
    r.lower_ratio = *lo;
    r.upper_ratio = *hi;
}

void check_taus(std::span<const double> taus) {
    if (taus.empty()) throw InputError("tau list is empty");
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (!(taus[i] > 0.0)) throw InputError("tau values must be positive");
        if (i > 0 && !(taus[i] > taus[i - 1])) throw InputError("tau values must be strictly increasing");
    }
}

struct SolvedPair {
    FundamentalMatrix y;
    FundamentalMatrix z;
};

SolvedPair solve_pair(const Potential& v, Complex lambda, const ScanOptions& options) {
    const auto grid = Grid::for_spectral_bound(lambda.real(), lambda.imag(), options.nodes_per_panel);
    const auto param = SpectralParameter::natural(lambda);
    auto y = solve_fundamental(v, param, SystemKind::direct, grid, options.solver).matrix;
    auto z = solve_fundamental(v, param, SystemKind::adjoint, grid, options.solver).matrix;
    return {std::move(y), std::move(z)};
}

}  // namespace

void CombinationCoefficients::validate() const {
    const Complex zero{};
    if (c1 == zero && c2 == zero && c1t == zero && c2t == zero) {
        throw std::invalid_argument("combination coefficients are all zero");
    }
}

std::vector<CombinationCoefficients> unit_sphere_samples(std::size_t count, std::uint64_t seed) {
    PortableNormal normal(seed);
    std::vector<CombinationCoefficients> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto [c1, c2] = unit_pair(normal);
        const auto [c1t, c2t] = unit_pair(normal);
        out.push_back({c1, c2, c1t, c2t});
    }
    return out;
}

ColumnNorms column_norms(const FundamentalMatrix& fm) {
    const auto& grid = *fm.grid();
    ColumnNorms out;
    std::vector<Complex> g(grid.size());
    for (int k = 0; k < 2; ++k) {
        const double growth = 2.0 * fm.phase_exponent(k).real();
        for (int j = 0; j < 2; ++j) {
            const auto b = fm.remainder(j, k);
            const double delta = j == k ? 1.0 : 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::norm(delta + b[i]);
            out.entry[j][k] = weighted_exp_integral(grid, g, growth).magnitude().sqrt();
        }
        const LogMagnitude a = out.entry[0][k];
        const LogMagnitude b = out.entry[1][k];
        out.column[k] = (a * a + b * b).sqrt();
    }
    return out;
}

CrossProducts cross_inner_products(const FundamentalMatrix& y, const FundamentalMatrix& z) {
    if (y.system() != SystemKind::direct || z.system() != SystemKind::adjoint) {
        throw PairingMismatchError("cross products need a direct and an adjoint fundamental matrix");
    }
    if (y.lambda().lambda() != z.lambda().lambda()) {
        throw PairingMismatchError("direct and adjoint matrices were built for different lambda");
    }
    if (!(*y.grid() == *z.grid())) throw GridMismatchError("direct and adjoint matrices use different grids");

    const auto& grid = *y.grid();
    const ColumnNorms ny = column_norms(y);
    const ColumnNorms nz = column_norms(z);
    CrossProducts out;
    std::vector<Complex> g(grid.size());
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            const Complex omega = y.phase_exponent(j) + std::conj(z.phase_exponent(k));
            for (std::size_t i = 0; i < g.size(); ++i) {
                Complex acc{};
                for (int m = 0; m < 2; ++m) {
                    const Complex a = (m == j ? 1.0 : 0.0) + y.remainder(m, j)[i];
                    const Complex b = (m == k ? 1.0 : 0.0) + z.remainder(m, k)[i];
                    acc += a * std::conj(b);
                }
                g[i] = acc;
            }
            out.gram[j][k] = weighted_exp_integral(grid, g, omega);
            out.normalized[j][k] = out.gram[j][k].magnitude() / (ny.column[j] * nz.column[k]);
        }
    }
    return out;
}

GridFunction2 combination(const FundamentalMatrix& fm, Complex c1, Complex c2) {
    return linear_combination(LogComplex::from_complex(c1), fm.column(0), LogComplex::from_complex(c2),
                              fm.column(1));
}

SandwichReport lower_bound_audit(const FundamentalMatrix& fm, std::span<const CombinationCoefficients> samples,
                                 double threshold) {
    const bool adjoint = fm.system() == SystemKind::adjoint;
    SandwichReport r;
    r.quantity = adjoint ? "adjoint_combination_lower_bound" : "combination_lower_bound";
    r.asserted = std::abs(fm.lambda().tau()) >= threshold;
    r.lambdas.push_back(fm.lambda().lambda());
    const ColumnNorms norms = column_norms(fm);
    const GridFunction2 col0 = fm.column(0);
    const GridFunction2 col1 = fm.column(1);
    for (const auto& s : samples) {
        const Complex a = adjoint ? s.c1t : s.c1;
        const Complex b = adjoint ? s.c2t : s.c2;
        const LogMagnitude bound = abs_log(a) * norms.column[0] + abs_log(b) * norms.column[1];
        if (bound.is_zero()) continue;
        const auto comb =
            linear_combination(LogComplex::from_complex(a), col0, LogComplex::from_complex(b), col1);
        r.ratios.push_back(std::exp((h_norm(comb) / bound).log()));
    }
    finish_sample_report(r);
    return r;
}

SandwichReport product_lower_bound_audit(const FundamentalMatrix& y, const FundamentalMatrix& z,
                                         std::span<const CombinationCoefficients> samples, double threshold) {
    if (y.system() != SystemKind::direct || z.system() != SystemKind::adjoint) {
        throw PairingMismatchError("product audit needs a direct and an adjoint fundamental matrix");
    }
    SandwichReport r;
    r.quantity = "product_lower_bound";
    r.asserted = std::abs(y.lambda().tau()) >= threshold;
    r.lambdas.push_back(y.lambda().lambda());
    const ColumnNorms ny = column_norms(y);
    const ColumnNorms nz = column_norms(z);
    for (const auto& s : samples) {
        const std::array<Complex, 2> c{s.c1, s.c2};
        const std::array<Complex, 2> ct{s.c1t, s.c2t};
        LogMagnitude bound = LogMagnitude::zero();
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < 2; ++k) bound = bound + abs_log(c[j]) * abs_log(ct[k]) * ny.column[j] * nz.column[k];
        }
        if (bound.is_zero()) continue;
        const LogMagnitude prod = h_norm(combination(y, s.c1, s.c2)) * h_norm(combination(z, s.c1t, s.c2t));
        r.ratios.push_back(std::exp((prod / bound).log()));
    }
    finish_sample_report(r);
    return r;
}

std::vector<LadderPoint> asymptotic_ladder(const Potential& v, double sigma, std::span<const double> taus,
                                           const ScanOptions& options) {
    check_taus(taus);
    return parallel_map(taus.size(), options.threads, [&](std::size_t i) {
        const Complex lambda(sigma, taus[i]);
        const auto pair = solve_pair(v, lambda, options);
        return LadderPoint{lambda, column_norms(pair.y), column_norms(pair.z), cross_inner_products(pair.y, pair.z)};
    });
}

ColumnSandwich column_sandwich(std::span<const LadderPoint> ladder) {
    const auto small = [](const LadderPoint& p) { return std::log(std::sqrt(std::abs(p.lambda.imag())) + 1.0); };
    const auto large = [&](const LadderPoint& p) { return small(p) - kPi * std::abs(p.lambda.imag()); };
    ColumnSandwich s;
    s.y1 = make_report("norm_Y1*(sqrt(tau)+1)", ladder, [&](auto& p) { return p.y.column[0].log() + small(p); });
    s.y2 = make_report("norm_Y2*(sqrt(tau)+1)*exp(-pi*tau)", ladder,
                       [&](auto& p) { return p.y.column[1].log() + large(p); });
    s.y11 = make_report("norm_Y11*(sqrt(tau)+1)", ladder, [&](auto& p) { return p.y.entry[0][0].log() + small(p); });
    s.y22 = make_report("norm_Y22*(sqrt(tau)+1)*exp(-pi*tau)", ladder,
                        [&](auto& p) { return p.y.entry[1][1].log() + large(p); });
    s.y21 = make_report("norm_Y21*(sqrt(tau)+1)", ladder, [&](auto& p) { return p.y.entry[1][0].log() + small(p); });
    s.y12 = make_report("norm_Y12*(sqrt(tau)+1)*exp(-pi*tau)", ladder,
                        [&](auto& p) { return p.y.entry[0][1].log() + large(p); });
    s.z1 = make_report("norm_Z1*(sqrt(tau)+1)*exp(-pi*tau)", ladder,
                       [&](auto& p) { return p.z.column[0].log() + large(p); });
    s.z2 = make_report("norm_Z2*(sqrt(tau)+1)", ladder, [&](auto& p) { return p.z.column[1].log() + small(p); });
    return s;
}

CrossTrends cross_trends(std::span<const LadderPoint> ladder) {
    const auto near = [](const LadderPoint& p) { return std::log(std::abs(p.lambda.imag()) + 1.0); };
    const auto far = [&](const LadderPoint& p) { return near(p) - 2.0 * kPi * std::abs(p.lambda.imag()); };
    const double log_pi = std::log(kPi);
    CrossTrends t;
    t.g11 = make_report("abs_G11/pi", ladder, [&](auto& p) { return p.cross.gram[0][0].log_abs() - log_pi; });
    t.g22 = make_report("abs_G22/pi", ladder, [&](auto& p) { return p.cross.gram[1][1].log_abs() - log_pi; });
    t.g12 = make_report("abs_G12*(tau+1)", ladder, [&](auto& p) { return p.cross.gram[0][1].log_abs() + near(p); });
    t.g21 = make_report("abs_G21*(tau+1)*exp(-2*pi*tau)", ladder,
                        [&](auto& p) { return p.cross.gram[1][0].log_abs() + far(p); });
    t.ghat11 = make_report("Ghat11", ladder, [&](auto& p) { return p.cross.normalized[0][0].log(); });
    t.ghat22 = make_report("Ghat22", ladder, [&](auto& p) { return p.cross.normalized[1][1].log(); });
    t.ghat12 = make_report("Ghat12*(tau+1)", ladder,
                           [&](auto& p) { return p.cross.normalized[0][1].log() + near(p); });
    t.ghat21 = make_report("Ghat21*(tau+1)*exp(-2*pi*tau)", ladder,
                           [&](auto& p) { return p.cross.normalized[1][0].log() + far(p); });
    return t;
}

bool within_band(const SandwichReport& report, double factor) {
    if (report.ratios.empty()) return true;
    const double ref = report.ratios.front();
    if (!(ref > 0.0) || !std::isfinite(ref)) return false;
    return std::all_of(report.ratios.begin(), report.ratios.end(),
                       [&](double r) { return r >= ref / factor && r <= ref * factor; });
}

bool decreasing_with_slack(std::span<const double> values, double slack) {
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i] <= (1.0 + slack) * values[i - 1])) return false;
    }
    return true;
}

std::vector<std::optional<Lemma1Pair>> lemma1_pairs(const Potential& v, double sigma, std::span<const double> taus,
                                                    const CombinationCoefficients& coeffs, bool normalize,
                                                    const ScanOptions& options) {
    check_taus(taus);
    coeffs.validate();
    return parallel_map(taus.size(), options.threads, [&](std::size_t i) -> std::optional<Lemma1Pair> {
        const Complex lambda(sigma, taus[i]);
        const auto pair = solve_pair(v, lambda, options);
        GridFunction2 y = combination(pair.y, coeffs.c1, coeffs.c2);
        GridFunction2 z = combination(pair.z, coeffs.c1t, coeffs.c2t);
        const LogComplex inner = log_inner_product(y, z);
        if (inner.is_zero()) return std::nullopt;
        if (normalize) z = z.times(LogComplex::from_complex(1.0) / inner.conj());
        return Lemma1Pair{lambda, std::move(y), std::move(z)};
    });
}

Lemma1Table lemma1_sweep(const Potential& v, double sigma, std::span<const double> taus,
                         const CombinationCoefficients& coeffs, bool normalize, const ScanOptions& options) {
    const auto pairs = lemma1_pairs(v, sigma, taus, coeffs, false, options);
    Lemma1Table table;
    table.normalized = normalize;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!pairs[i]) {
            table.skipped.push_back({taus[i], "inner product <y, z> vanishes; pair cannot be normalized"});
            continue;
        }
        const auto& pr = *pairs[i];
        const LogComplex inner = log_inner_product(pr.y, pr.z);
        Lemma1Row row;
        row.tau = taus[i];
        row.log_norm_y = h_norm(pr.y).log();
        row.log_norm_z = h_norm(pr.z).log();
        row.log_inner = inner.log_abs();
        row.ratio = std::exp(row.log_inner - row.log_norm_y - row.log_norm_z);
        if (normalize) {
            // z -> z / conj(<y, z>) leaves the ratio unchanged
            row.log_norm_z -= row.log_inner;
            row.log_inner = 0.0;
            row.log_norm_product = row.log_norm_y + row.log_norm_z;
        }
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace dirac
