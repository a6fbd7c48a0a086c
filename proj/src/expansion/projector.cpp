#include "dirac/expansion/projector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "dirac/errors.hpp"

namespace dirac {

namespace {

const double kLogTwoSqrtTwo = std::log(2.0 * std::sqrt(2.0));

void require_normalized(const EigenRecord& r) {
    if (!r.y || !r.z || !r.biorthogonal) {
        throw NormalizationError("record at lambda without a biorthogonally normalized pair");
    }
    const Complex pairing = log_inner_product(*r.y, *r.z).to_complex();
    if (std::abs(pairing - 1.0) > 1e-8) throw NormalizationError("record pair does not satisfy <y, z> = 1");
}

}  // namespace

RankOneProjector::RankOneProjector(GridFunction2 y, GridFunction2 z) : y_(std::move(y)), z_(std::move(z)) {
    require_same_grid(y_, z_);
}

GridFunction2 apply_projector(const RankOneProjector& p, const GridFunction2& f) {
    require_same_grid(f, p.z());
    return p.y().times(log_inner_product(f, p.z()));
}

ProjectorNorm projector_norm(const RankOneProjector& p) {
    ProjectorNorm out;
    const LogMagnitude ny = h_norm(p.y());
    const LogMagnitude nz = h_norm(p.z());
    out.exact = ny * nz;
    out.scaled_lower_bound = LogMagnitude::from_log(out.exact.log() - kLogTwoSqrtTwo);
    const auto cy = component_norms(p.y());
    const auto cz = component_norms(p.z());
    out.component_bound = LogMagnitude::from_log(((cz[0] + cz[1]) * (cy[0] + cy[1])).log() - kLogTwoSqrtTwo);

    if (!nz.is_zero()) {
        const GridFunction2 f = p.z().times(LogComplex::exp(-nz.log()));
        out.maximizer_value = h_norm(apply_projector(p, f));
    }
    for (int c = 0; c < 2; ++c) {
        // first probe uses the second component of z, second probe the first
        const int comp = c == 0 ? 1 : 0;
        if (cz[comp].is_zero()) {
            out.probe_values[c] = LogMagnitude::zero();
            continue;
        }
        std::vector<Complex> zero(p.z().size());
        std::vector<Complex> part = comp == 0 ? p.z().first() : p.z().second();
        GridFunction2 f = comp == 0 ? GridFunction2(p.z().grid(), std::move(part), zero, p.z().log_scale())
                                    : GridFunction2(p.z().grid(), zero, std::move(part), p.z().log_scale());
        f = f.times(LogComplex::exp(-cz[comp].log()));
        out.probe_values[c] = h_norm(apply_projector(p, f));
    }
    return out;
}

std::vector<std::size_t> expansion_order(std::span<const EigenRecord> system) {
    std::vector<std::size_t> idx(system.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const Complex la = system[a].lambda;
        const Complex lb = system[b].lambda;
        return std::make_tuple(std::abs(la.real()), la.imag(), la.real()) <
               std::make_tuple(std::abs(lb.real()), lb.imag(), lb.real());
    });
    return idx;
}

GridFunction2 partial_sum(std::span<const EigenRecord> system, const GridFunction2& f, std::size_t n) {
    if (n > system.size()) throw std::invalid_argument("partial_sum: N exceeds the system size");
    GridFunction2 acc = GridFunction2::zeros(f.grid());
    const auto order = expansion_order(system);
    const LogComplex one = LogComplex::from_complex(1.0);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& rec = system[order[k]];
        require_normalized(rec);
        const RankOneProjector p(*rec.y, *rec.z);
        acc = linear_combination(one, acc, one, apply_projector(p, f));
    }
    return acc;
}

std::vector<EigenRecord> records_from_pairs(std::span<const std::optional<Lemma1Pair>> pairs) {
    std::vector<EigenRecord> out;
    for (const auto& p : pairs) {
        if (!p) continue;
        EigenRecord r;
        r.lambda = p->lambda;
        r.y = p->y;
        r.z = p->z;
        r.biorthogonal = true;
        r.pairing_value = log_inner_product(p->y, p->z).to_complex();
        r.refined = true;
        out.push_back(std::move(r));
    }
    return out;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::unbounded_trend:
            return "unbounded-trend";
        case Verdict::bounded:
            return "bounded";
        case Verdict::inconclusive:
            break;
    }
    return "inconclusive";
}

DivergenceReport divergence_witness(std::span<const EigenRecord> system, const std::optional<Probe>& probe,
                                    bool sort) {
    if (system.empty()) throw std::invalid_argument("divergence_witness: empty system");
    std::vector<std::size_t> order(system.size());
    std::iota(order.begin(), order.end(), 0);
    if (sort) order = expansion_order(system);

    DivergenceReport rep;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& rec = system[order[k]];
        if (!rec.y || !rec.z) throw NormalizationError("record without eigenfunction pair");
        const LogMagnitude ny = h_norm(*rec.y);
        rep.n.push_back(static_cast<int>(k + 1));
        rep.lambdas.push_back(rec.lambda);
        rep.log_norms.push_back((ny * h_norm(*rec.z)).log());
        rep.running_max.push_back(k == 0 ? rep.log_norms.back() : std::max(rep.running_max.back(), rep.log_norms.back()));
        if (probe) {
            const auto f = GridFunction2::sample(rec.z->grid(), probe->first, probe->second);
            rep.log_witness.push_back((log_inner_product(f, *rec.z).magnitude() * ny).log());
        } else {
            rep.log_witness.push_back(std::nullopt);
        }
    }

    const std::size_t count = rep.log_norms.size();
    if (count < 2) return rep;
    const std::size_t tail = (count - 1) / 2;
    rep.tail_rise = rep.running_max[count - 1] - rep.running_max[tail];
    const auto [lo, hi] = std::minmax_element(rep.log_norms.begin(), rep.log_norms.end());
    const double decade = std::log(10.0);
    if (rep.tail_rise >= decade) {
        rep.verdict = Verdict::unbounded_trend;
    } else if (*hi - *lo < decade) {
        rep.verdict = Verdict::bounded;
    }
    return rep;
}

}  // namespace dirac
