#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dirac/errors.hpp"
#include "dirac/expansion/projector.hpp"

using namespace dirac;
using std::numbers::pi;

namespace {

const double kDemoNorm = 3.0 / (4.0 * std::log(2.0));

GridFunction2 unit_first(const GridPtr& g) {
    return GridFunction2::sample(g, [](double) { return Complex(1 / std::sqrt(pi)); }, [](double) { return Complex(0); });
}

const SpectrumReport& demo() {
    static const SpectrumReport rep = find_eigenvalues(BoundaryConditions::demo(), Potential::zero(), {-5, 5, -2, 2});
    return rep;
}

}  // namespace

TEST_SUITE("expansion") {

TEST_CASE("trivial projector") {
    const auto g = std::make_shared<const Grid>(64);
    const auto e = unit_first(g);
    const RankOneProjector p(e, e);
    const auto out = apply_projector(p, e);
    CHECK(h_norm(linear_combination(LogComplex::from_complex(1.0), out, LogComplex::from_complex(-1.0), e)).linear() < 1e-14);
    const auto orth = GridFunction2::sample(g, [](double) { return Complex(0); }, [](double) { return Complex(1); });
    CHECK(h_norm(apply_projector(p, orth)).is_zero());
    CHECK(projector_norm(p).exact.linear() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("projector scalar against direct quadrature") {
    const auto& r = demo().records[2];
    const auto g = r.y->grid();
    const auto f = GridFunction2::sample(g, [](double) { return Complex(1); }, [](double) { return Complex(1); });
    const auto out = apply_projector(RankOneProjector(*r.y, *r.z), f);
    // <f, z> with z = (0, z2): integral of conj(z2)
    const auto z = r.z->materialized();
    const auto w = g->weights();
    Complex s = 0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * std::conj(z.second()[i]);
    const auto direct = r.y->times(LogComplex::from_complex(s));
    const auto diff = linear_combination(LogComplex::from_complex(1.0), out, LogComplex::from_complex(-1.0), direct);
    CHECK(h_norm(diff).linear() < 1e-12);
}

TEST_CASE("demo projector norms and maximizer") {
    for (const auto& r : demo().records) {
        const auto n = projector_norm(RankOneProjector(*r.y, *r.z));
        CHECK(n.exact.linear() == doctest::Approx(kDemoNorm).epsilon(1e-9));
        CHECK(std::abs(n.maximizer_value.log() - n.exact.log()) < 1e-10);
        CHECK(n.exact.log() >= n.scaled_lower_bound.log());
        CHECK(n.exact.log() + 1e-12 >= n.component_bound.log());
        for (const auto& p : n.probe_values) CHECK(p.log() <= n.exact.log() + 1e-12);
    }
}

TEST_CASE("partial sums sift biorthogonal terms") {
    const auto& recs = demo().records;
    const auto order = expansion_order(recs);
    CHECK(recs[order[0]].lambda.real() == doctest::Approx(0.0));
    for (std::size_t k = 0; k < 3; ++k) {
        const auto& target = *recs[order[k]].y;
        const auto s = partial_sum(recs, target, 3);
        const auto diff = linear_combination(LogComplex::from_complex(1.0), s, LogComplex::from_complex(-1.0), target);
        CHECK(h_norm(diff).linear() < 1e-7);
    }
    const auto g = recs[0].y->grid();
    const auto first = GridFunction2::sample(g, [](double) { return Complex(1); }, [](double) { return Complex(0); });
    CHECK(h_norm(partial_sum(recs, first, 5)).linear() < 1e-12);
    CHECK(h_norm(partial_sum(recs, first, 0)).is_zero());
    CHECK_THROWS_AS(partial_sum(recs, first, 6), std::invalid_argument);
}

TEST_CASE("non-normalized record is refused") {
    auto recs = demo().records;
    recs[0].z = recs[0].z->times(LogComplex::from_complex(2.0));
    const auto f = *recs[0].y;
    CHECK_THROWS_AS(partial_sum(recs, f, 5), NormalizationError);
}

TEST_CASE("divergence verdicts") {
    const auto bounded = divergence_witness(demo().records);
    CHECK(bounded.verdict == Verdict::bounded);
    for (double l : bounded.log_norms) CHECK(l == doctest::Approx(std::log(kDemoNorm)).epsilon(1e-9));

    std::vector<double> taus;
    for (int n = 1; n <= 30; ++n) taus.push_back(std::log(n + 1.0));
    const auto pairs = lemma1_pairs(Potential::zero(), 0.0, taus, {1.0, 1.0, 1.0, 1.0}, true);
    const auto recs = records_from_pairs(pairs);
    REQUIRE(recs.size() == 30);
    const auto rep = divergence_witness(recs, std::nullopt, false);
    CHECK(rep.verdict == Verdict::unbounded_trend);
    CHECK(rep.log_norms.back() - rep.log_norms.front() >= pi * (taus.back() - taus.front()) / 2);

    const std::span<const EigenRecord> one(recs.data(), 1);
    CHECK(divergence_witness(one).verdict == Verdict::inconclusive);
    CHECK(to_string(Verdict::unbounded_trend) == "unbounded-trend");
}

}
