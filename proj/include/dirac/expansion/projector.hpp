#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dirac/asymptotics/asymptotics.hpp"
#include "dirac/bvp/spectrum.hpp"

namespace dirac {

/// f -> <f, z> y.
class RankOneProjector {
public:
    /// Throws GridMismatchError when y and z live on different grids.
    RankOneProjector(GridFunction2 y, GridFunction2 z);

    const GridFunction2& y() const { return y_; }
    const GridFunction2& z() const { return z_; }

private:
    GridFunction2 y_;
    GridFunction2 z_;
};

GridFunction2 apply_projector(const RankOneProjector& p, const GridFunction2& f);

struct ProjectorNorm {
    LogMagnitude exact;              ///< ||y|| ||z||
    LogMagnitude scaled_lower_bound;  ///< exact / (2 sqrt 2)
    LogMagnitude component_bound;    ///< (||z1|| + ||z2||)(||y1|| + ||y2||) / (2 sqrt 2)
    LogMagnitude maximizer_value;    ///< ||P f|| at f = z / ||z||
    /// ||P f|| at f = col(0, z2/||z2||) and f = col(z1/||z1||, 0); zero when
    /// the component vanishes.
    std::array<LogMagnitude, 2> probe_values;
};

ProjectorNorm projector_norm(const RankOneProjector& p);

/// Canonical enumeration: |Re lambda|, then Im lambda, then Re lambda.
std::vector<std::size_t> expansion_order(std::span<const EigenRecord> system);

/// Sum of the first n projectors in the canonical enumeration. Throws
/// NormalizationError when one of them lacks a normalized pair, and
/// std::invalid_argument when n exceeds the system size.
GridFunction2 partial_sum(std::span<const EigenRecord> system, const GridFunction2& f, std::size_t n);

/// Records built from normalized lemma1 pairs (<y, z> = 1).
std::vector<EigenRecord> records_from_pairs(std::span<const std::optional<Lemma1Pair>> pairs);

enum class Verdict { unbounded_trend, bounded, inconclusive };
std::string to_string(Verdict v);

struct DivergenceReport {
    std::vector<int> n;
    std::vector<Complex> lambdas;
    std::vector<double> log_norms;
    std::vector<double> running_max;
    std::vector<std::optional<double>> log_witness;  ///< log(|<f, z_n>| ||y_n||)
    double tail_rise = 0.0;
    Verdict verdict = Verdict::inconclusive;
};

/// Probe f given componentwise; it is sampled on the grid of every record.
struct Probe {
    std::function<Complex(double)> first;
    std::function<Complex(double)> second;
};

/// Projector norms in the canonical enumeration (sorted when `sort` is set,
/// given order otherwise) and a verdict on their growth over the second half.
DivergenceReport divergence_witness(std::span<const EigenRecord> system, const std::optional<Probe>& probe = {},
                                    bool sort = true);

}  // namespace dirac
