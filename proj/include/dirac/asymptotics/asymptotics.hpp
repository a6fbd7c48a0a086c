#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dirac/dirac_solver/fundamental.hpp"

namespace dirac {

/// Coefficients of y = C1 Y1 + C2 Y2 and z = C1t Z1 + C2t Z2.
struct CombinationCoefficients {
    Complex c1{1.0, 0.0};
    Complex c2{0.0, 0.0};
    Complex c1t{1.0, 0.0};
    Complex c2t{0.0, 0.0};

    /// Throws std::invalid_argument when all four vanish.
    void validate() const;
};

/// Deterministic samples: (C1, C2) and (C1t, C2t) each uniform on the unit
/// sphere of C^2.
std::vector<CombinationCoefficients> unit_sphere_samples(std::size_t count, std::uint64_t seed = 42);

/// Measured quantity divided by the envelope shape claimed for it.
struct SandwichReport {
    std::string quantity;
    double lower_ratio = 0.0;
    double upper_ratio = 0.0;
    std::vector<Complex> lambdas;
    std::vector<double> ratios;  ///< one per lambda (or per sample)
    bool asserted = true;        ///< false below the activation threshold

    double band_factor() const { return upper_ratio / lower_ratio; }
};

/// entry[j][k] = ||Y_jk||_{L2}, column[k] = ||Y^{[k]}||_H.
struct ColumnNorms {
    std::array<std::array<LogMagnitude, 2>, 2> entry;
    std::array<LogMagnitude, 2> column;
};

ColumnNorms column_norms(const FundamentalMatrix& fm);

/// gram[j][k] = <Y^{[j]}, Z^{[k]}>; normalized[j][k] = |gram| / (||Y^{[j]}|| ||Z^{[k]}||).
struct CrossProducts {
    std::array<std::array<LogComplex, 2>, 2> gram;
    std::array<std::array<LogMagnitude, 2>, 2> normalized;
};

/// Requires a direct and an adjoint matrix for the same lambda on the same
/// grid. Phases are combined analytically before quadrature.
CrossProducts cross_inner_products(const FundamentalMatrix& y, const FundamentalMatrix& z);

/// c1 Y^{[1]} + c2 Y^{[2]} as a scaled grid function.
GridFunction2 combination(const FundamentalMatrix& fm, Complex c1, Complex c2);

/// Worst case over samples of ||C1 Y1 + C2 Y2|| / (|C1| ||Y1|| + |C2| ||Y2||).
/// Uses (C1, C2) for a direct matrix and (C1t, C2t) for an adjoint one.
/// Below |Im lambda| < threshold the report is marked not asserted.
SandwichReport lower_bound_audit(const FundamentalMatrix& fm, std::span<const CombinationCoefficients> samples,
                                 double threshold = 2.0);

/// Worst case over samples of ||y|| ||z|| / sum_jk |C_j| |C_k~| ||Y^{[j]}|| ||Z^{[k]}||.
SandwichReport product_lower_bound_audit(const FundamentalMatrix& y, const FundamentalMatrix& z,
                                         std::span<const CombinationCoefficients> samples, double threshold = 2.0);

struct ScanOptions {
    std::size_t nodes_per_panel = Grid::kDefaultNodesPerPanel;
    SolverOptions solver{};
    unsigned threads = 1;
};

/// Norms and cross products along lambda = sigma + i tau, tau > 0.
struct LadderPoint {
    Complex lambda;
    ColumnNorms y;
    ColumnNorms z;
    CrossProducts cross;
};

std::vector<LadderPoint> asymptotic_ladder(const Potential& v, double sigma, std::span<const double> taus,
                                           const ScanOptions& options = {});

/// Norm shapes along a ladder (Im lambda > 0): small columns are scaled by
/// sqrt(tau)+1, large ones additionally by e^{-pi tau}.
struct ColumnSandwich {
    SandwichReport y1, y2, y11, y22, y21, y12, z1, z2;

    std::vector<const SandwichReport*> all() const { return {&y1, &y2, &y11, &y22, &y21, &y12, &z1, &z2}; }
};

ColumnSandwich column_sandwich(std::span<const LadderPoint> ladder);

/// Cross products scaled by their claimed envelopes: 1/pi on the diagonal,
/// tau+1 and (tau+1) e^{-2 pi tau} off it. The ghat entries apply the same
/// off-diagonal factors to the normalized matrix.
struct CrossTrends {
    SandwichReport g11, g22, g12, g21, ghat11, ghat22, ghat12, ghat21;

    std::vector<const SandwichReport*> all() const {
        return {&g11, &g22, &g12, &g21, &ghat11, &ghat22, &ghat12, &ghat21};
    }
};

CrossTrends cross_trends(std::span<const LadderPoint> ladder);

/// All ratios lie within [first / factor, first * factor].
bool within_band(const SandwichReport& report, double factor);

/// Every consecutive ratio satisfies r[i+1] <= (1 + slack) r[i].
bool decreasing_with_slack(std::span<const double> values, double slack = 0.2);

struct Lemma1Row {
    double tau = 0.0;
    double log_norm_y = 0.0;
    double log_norm_z = 0.0;
    double log_inner = 0.0;
    double ratio = 0.0;
    std::optional<double> log_norm_product;  ///< set when normalized
};

struct Lemma1Skip {
    double tau;
    std::string reason;
};

struct Lemma1Table {
    bool normalized = false;
    std::vector<Lemma1Row> rows;
    std::vector<Lemma1Skip> skipped;
};

struct Lemma1Pair {
    Complex lambda;
    GridFunction2 y;
    GridFunction2 z;
};

/// y = C1 Y1 + C2 Y2, z = C1t Z1 + C2t Z2 at lambda = sigma + i tau. With
/// normalize set, z is rescaled so that <y, z> = 1. Pairs with <y, z> = 0
/// are skipped.
std::vector<std::optional<Lemma1Pair>> lemma1_pairs(const Potential& v, double sigma, std::span<const double> taus,
                                                    const CombinationCoefficients& coeffs, bool normalize,
                                                    const ScanOptions& options = {});

Lemma1Table lemma1_sweep(const Potential& v, double sigma, std::span<const double> taus,
                         const CombinationCoefficients& coeffs, bool normalize, const ScanOptions& options = {});

}  // namespace dirac
