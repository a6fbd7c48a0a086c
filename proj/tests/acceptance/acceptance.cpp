// Acceptance run: one line per criterion, with timing.
//
//   acceptance [--known-red AC6,AC7]
//
// Criteria listed in --known-red still print FAIL when they fail, but do not
// change the exit status; if one of them passes the run is reported as stale.

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "dirac/asymptotics/asymptotics.hpp"
#include "dirac/bvp/boundary.hpp"
#include "dirac/bvp/spectrum.hpp"
#include "dirac/cli/commands.hpp"
#include "dirac/cli/config.hpp"
#include "dirac/dirac_solver/fundamental.hpp"
#include "dirac/dirac_solver/oracle.hpp"
#include "dirac/expansion/projector.hpp"
#include "oracles.hpp"

using namespace dirac;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

const Complex I(0, 1);

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, std::string what) {
        if (!ok) pass = false;
        notes.push_back((ok ? "ok: " : "FAILED: ") + std::move(what));
    }
};

// Worst relative variation of the de-phased determinant over every solve seen.
double g_liouville = 0.0;
int g_solves = 0;

void track(const FundamentalMatrix& fm) {
    const Complex d0 = fm.dephased_det_at_left();
    double dev = 0;
    for (std::size_t i = 0; i < fm.grid()->size(); ++i) dev = std::max(dev, std::abs(fm.dephased_det(i) - d0));
    g_liouville = std::max(g_liouville, dev / std::abs(d0));
    ++g_solves;
}

FundamentalMatrix solve(const Potential& v, Complex lam, SystemKind kind = SystemKind::direct, GridPtr g = nullptr) {
    if (!g) g = Grid::for_spectral_bound(lam.real(), lam.imag());
    auto fm = solve_fundamental(v, SpectralParameter::natural(lam), kind, g).matrix;
    track(fm);
    return fm;
}

std::string sci(double v) { return fmt::format("{:.3g}", v); }

const Potential& constant11() {
    static const Potential v = Potential::constant(1.0, 1.0);
    return v;
}
const Potential& trig_preset() {
    static const Potential v = Potential::trig({{2, 1.0}}, {{-1, 1.0}});
    return v;
}

Outcome ac1() {
    Outcome o;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> re(-80, 80), im(-50, 50);
    double worst_b = 0, worst_y = 0;
    for (int k = 0; k < 20; ++k) {
        Complex lam(re(rng), im(rng));
        if (std::abs(lam) > 100) lam *= 100 / std::abs(lam);
        const auto fm = solve(Potential::zero(), lam);
        for (int j = 0; j < 2; ++j)
            for (int m = 0; m < 2; ++m)
                for (Complex b : fm.remainder(j, m)) worst_b = std::max(worst_b, std::abs(b));
        const auto x = fm.grid()->nodes();
        for (std::size_t i = 0; i < x.size(); i += 7) {
            const auto d1 = fm.entry(0, 0, i) / LogComplex::exp(I * lam * x[i]);
            const auto d2 = fm.entry(1, 1, i) / LogComplex::exp(-I * lam * x[i]);
            worst_y = std::max({worst_y, std::abs(d1.to_complex() - 1.0), std::abs(d2.to_complex() - 1.0)});
            worst_y = std::max({worst_y, std::abs(fm.entry(0, 1, i).to_complex()), std::abs(fm.entry(1, 0, i).to_complex())});
        }
    }
    o.check(worst_b < 1e-12, "sup |b| = " + sci(worst_b) + " < 1e-12 over 20 lambdas");
    o.check(worst_y < 1e-12, "Y = diag(e^{i lam x}, e^{-i lam x}) to " + sci(worst_y));
    return o;
}

Outcome ac2() {
    Outcome o;
    const Complex lams[] = {{5, 0}, {-5, 0}, {3, 1}, {-7, 2.5}, {12, -1}, {0.5, 0.5}, {20, 4}, {-15, -3}, {30, 0.1}, {8, -5}};
    double worst = 0;
    for (Complex lam : lams) {
        const auto fm = solve(constant11(), lam);
        const auto x = fm.grid()->nodes();
        for (std::size_t i = 0; i < x.size(); i += 3) {
            const auto m = oracle_constant(1.0, 1.0, lam, x[i], fm.anchor_plane());
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) {
                    const Complex dephased = m[j][k] * std::exp(-fm.phase_exponent(k) * x[i]);
                    const Complex mine = (j == k ? 1.0 : 0.0) + fm.remainder(j, k)[i];
                    worst = std::max(worst, std::abs(dephased - mine));
                }
        }
    }
    o.check(worst < 1e-8, "max de-phased entry error vs closed form = " + sci(worst));
    return o;
}

Outcome ac3() {
    Outcome o;
    const Complex lam(3, 1);
    const auto fm = solve(Potential::trig({{2, 1.0}}, {}), lam);
    const auto x = fm.grid()->nodes();
    double err = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        err = std::max(err, std::abs(fm.remainder(0, 1)[i] - oracle::triangular_b12(lam, x[i])));
    err = std::max(err, std::abs(fm.remainder_at_right(0, 1) - oracle::triangular_b12(lam, pi)));
    o.check(err < 1e-9, "sup |b12 - closed form| = " + sci(err));
    return o;
}

Outcome ac4() {
    Outcome o;
    o.check(g_liouville < 1e-8, fmt::format("max relative det variation {} over {} solves", sci(g_liouville), g_solves));
    return o;
}

Outcome ac5() {
    Outcome o;
    double c1 = 1e300, c2 = 0, d1 = 1e300, d2 = 0, closed = 0;
    for (int k = 0; k <= 5000; ++k) {
        const double tau = 50.0 * k / 5000;
        const Complex lam(0, tau);
        const double s = std::sqrt(tau) + 1;
        const double plus = exp_l2_norm(lam, ExpSign::plus).linear();
        const double ref = tau == 0 ? std::sqrt(pi) : std::sqrt(-std::expm1(-2 * pi * tau) / (2 * tau));
        closed = std::max(closed, std::abs(plus - ref) / ref);
        c1 = std::min(c1, plus * s);
        c2 = std::max(c2, plus * s);
        const double minus = std::exp(exp_l2_norm(lam, ExpSign::minus).log() - pi * tau) * s;
        d1 = std::min(d1, minus);
        d2 = std::max(d2, minus);
    }
    o.check(closed < 1e-12, "exp_l2_norm vs sqrt((1-e^{-2 pi tau})/(2 tau)): rel err " + sci(closed));
    o.check(c2 / c1 <= 4.6, fmt::format("sign +: c1 = {:.4f}, c2 = {:.4f}, band {:.3f} <= 4.6", c1, c2, c2 / c1));
    o.check(d2 / d1 <= 4.6, fmt::format("sign - (times e^(-pi tau)): c1 = {:.4f}, c2 = {:.4f}, band {:.3f} <= 4.6", d1, d2, d2 / d1));
    return o;
}

Outcome ac6() {
    Outcome o;
    const std::vector<double> taus{1, 2, 4, 8, 16, 32};
    ScanOptions opts;
    opts.threads = 4;
    for (const auto& [name, v] : {std::pair<std::string, const Potential*>{"Constant(1,1)", &constant11()},
                                  {"TrigPoly(e^{2ix}, e^{-ix})", &trig_preset()}}) {
        const auto ladder = asymptotic_ladder(*v, 20.0, taus, opts);
        for (double tau : taus) {
            const auto y = solve(*v, {20.0, tau});
            solve(*v, {20.0, tau}, SystemKind::adjoint, y.grid());
        }
        const auto s = column_sandwich(ladder);
        const auto t = cross_trends(ladder);
        o.check(within_band(s.y1, 4.0), fmt::format("{}: (sqrt tau+1)|Y1| band {:.3f}", name, s.y1.band_factor()));
        o.check(within_band(s.y2, 4.0), fmt::format("{}: (sqrt tau+1)e^(-pi tau)|Y2| band {:.3f}", name, s.y2.band_factor()));
        auto seq = [](const SandwichReport& r) {
            std::string out;
            for (double x : r.ratios) out += (out.empty() ? "" : " ") + sci(x);
            return out;
        };
        o.check(decreasing_with_slack(t.ghat12.ratios), fmt::format("{}: Ghat12(tau+1) decreasing [{}]", name, seq(t.ghat12)));
        o.check(decreasing_with_slack(t.ghat21.ratios),
                fmt::format("{}: Ghat21(tau+1)e^(-2 pi tau) decreasing [{}]", name, seq(t.ghat21)));
        for (const auto* r : {&t.ghat11, &t.ghat22}) {
            o.check(r->lower_ratio >= 0.05 && r->upper_ratio <= 1.0,
                    fmt::format("{}: {} in [0.05, 1]: [{}]", name, r->quantity, seq(*r)));
        }
    }
    return o;
}

Outcome ac7() {
    Outcome o;
    const CombinationCoefficients ones{1.0, 1.0, 1.0, 1.0};
    const std::vector<double> small{1, 2, 4};
    const auto z = lemma1_sweep(Potential::zero(), 0.0, small, ones, false);
    double err = z.rows.size() == 3 ? 0 : 1;
    for (const auto& r : z.rows) err = std::max(err, std::abs(r.ratio - oracle::lemma_ratio_zero(r.tau)));
    o.check(err < 1e-9, "V = 0: |r - 2 pi tau / sinh(2 pi tau)| = " + sci(err));

    const std::vector<double> taus{1, 2, 4, 8, 16, 32};
    for (const auto& [name, v] : {std::pair<std::string, const Potential*>{"Constant(1,1)", &constant11()},
                                  {"TrigPoly(e^{2ix}, e^{-ix})", &trig_preset()}}) {
        const auto t = lemma1_sweep(*v, 0.0, taus, ones, false);
        bool dec = t.rows.size() == taus.size();
        std::string seq;
        for (std::size_t k = 0; k < t.rows.size(); ++k) {
            seq += (seq.empty() ? "" : " ") + sci(t.rows[k].ratio);
            if (k > 0 && t.rows[k].tau > 2 && !(t.rows[k].ratio < t.rows[k - 1].ratio)) dec = false;
        }
        o.check(dec, fmt::format("{}: r strictly decreasing for tau >= 2 [{}]", name, seq));
        const double r32 = t.rows.empty() ? 1.0 : t.rows.back().ratio;
        o.check(r32 < 1e-3, fmt::format("{}: r(32) = {} < 1e-3", name, sci(r32)));
    }
    for (const auto& [name, v] : {std::pair<std::string, const Potential*>{"Zero", nullptr},
                                  {"Constant(1,1)", &constant11()}, {"TrigPoly", &trig_preset()}}) {
        const auto t = lemma1_sweep(v ? *v : Potential::zero(), 0.0, taus, ones, true);
        bool inc = t.rows.size() == taus.size();
        for (std::size_t k = 1; k < t.rows.size(); ++k)
            if (!(*t.rows[k].log_norm_product > *t.rows[k - 1].log_norm_product)) inc = false;
        o.check(inc, fmt::format("{}: normalized log(|y||z|) increasing, {:.3f} -> {:.3f}", name,
                                 *t.rows.front().log_norm_product, *t.rows.back().log_norm_product));
    }
    return o;
}

const SpectrumReport& demo_spectrum() {
    static const SpectrumReport rep = find_eigenvalues(BoundaryConditions::demo(), Potential::zero(), {-5, 5, -2, 2});
    return rep;
}

Outcome ac8() {
    Outcome o;
    const auto& d = demo_spectrum();
    double err = d.records.size() == 5 ? 0 : 1;
    for (std::size_t k = 0; k < d.records.size() && k < 5; ++k) {
        const Complex expect(2.0 * (static_cast<int>(k) - 2), -std::log(2.0) / pi);
        err = std::max(err, std::abs(d.records[k].lambda - expect));
    }
    o.check(err < 1e-8, fmt::format("demo: {} roots, max |lambda - (2n - i ln2/pi)| = {}", d.records.size(), sci(err)));

    const auto p = find_eigenvalues(BoundaryConditions::periodic(), Potential::zero(), {-5, 5, -1, 1});
    bool doubles = p.records.size() == 5;
    double perr = 0;
    for (std::size_t k = 0; k < p.records.size(); ++k) {
        doubles = doubles && p.records[k].multiplicity == 2;
        perr = std::max(perr, std::abs(p.records[k].lambda - Complex(2.0 * (static_cast<int>(k) - 2), 0)));
    }
    o.check(doubles && perr < 1e-3, fmt::format("periodic: multiplicity 2 at 2n, location error {}", sci(perr)));

    const auto c = find_eigenvalues(BoundaryConditions::demo(), constant11(), {-5, 5, -2, 2});
    for (const auto* rep : {&d, &p, &c}) {
        int total = 0;
        for (const auto& r : rep->records) total += r.multiplicity;
        o.check(total == rep->winding_total,
                fmt::format("winding {} == multiplicity sum {} on [{}, {}]x[{}, {}]", rep->winding_total, total,
                            rep->region.re_min, rep->region.re_max, rep->region.im_min, rep->region.im_max));
    }
    return o;
}

Outcome ac9() {
    Outcome o;
    const auto& recs = demo_spectrum().records;
    double worst = recs.size() == 5 ? 0 : 1;
    for (const auto& a : recs)
        for (const auto& b : recs) {
            const Complex ip = log_inner_product(*a.y, *b.z).to_complex();
            worst = std::max(worst, std::abs(ip - (&a == &b ? 1.0 : 0.0)));
        }
    o.check(worst < 1e-7, "max |<y_n, z_k> - delta_nk| = " + sci(worst));

    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1, 1);
    auto rnd = [&] { return Complex(u(rng), u(rng)); };
    auto kernel = [](const BoundaryMatrix& m) {
        Eigen::Matrix4cd full = Eigen::Matrix4cd::Zero();
        full.topRows(2) = m;
        Eigen::JacobiSVD<Eigen::Matrix4cd> svd(full, Eigen::ComputeFullV);
        return Eigen::Matrix<Complex, 4, 2>(svd.matrixV().rightCols(2));
    };
    const auto g = std::make_shared<const Grid>(64);
    auto function_with = [&](const Eigen::Vector4cd& e, Complex bump) {
        return GridFunction2::sample(
            g, [&](double x) { return e(0) + (e(2) - e(0)) * x / pi + bump * std::sin(x); },
            [&](double x) { return e(1) + (e(3) - e(1)) * x / pi + bump * std::sin(2 * x); });
    };
    BoundaryMatrix mixed;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 4; ++j) mixed(i, j) = rnd();
    const BoundaryConditions bcs[] = {BoundaryConditions::demo(), BoundaryConditions::periodic(), BoundaryConditions(mixed)};
    double lag = 0;
    int pairs = 0;
    for (int k = 0; k < 50; ++k) {
        const auto& bc = bcs[k % 3];
        const auto ky = kernel(bc.matrix());
        const auto kz = kernel(adjoint_bc(bc).matrix());
        const Eigen::Vector4cd ey = ky * Eigen::Vector2cd(rnd(), rnd());
        const Eigen::Vector4cd ez = kz * Eigen::Vector2cd(rnd(), rnd());
        lag = std::max(lag, std::abs(lagrange_boundary_term(function_with(ey, rnd()), function_with(ez, rnd()))));
        ++pairs;
    }
    o.check(lag < 1e-8, fmt::format("Lagrange boundary term max {} over {} admissible pairs", sci(lag), pairs));
    return o;
}

Outcome ac10() {
    Outcome o;
    const double demo_norm = 3 / (4 * std::log(2.0));
    double max_gap = 0, demo_err = 0;
    bool bound = true;
    auto audit = [&](const EigenRecord& r) {
        const auto n = projector_norm(RankOneProjector(*r.y, *r.z));
        max_gap = std::max(max_gap, std::abs(n.maximizer_value.log() - n.exact.log()));
        const double probe = std::max(n.probe_values[0].log(), n.probe_values[1].log());
        const double tol = 1e-12;
        bound = bound && n.exact.log() + tol >= n.component_bound.log() &&
                n.component_bound.log() + tol >= n.scaled_lower_bound.log() && probe + tol >= n.component_bound.log();
        return n;
    };
    for (const auto& r : demo_spectrum().records) demo_err = std::max(demo_err, std::abs(audit(r).exact.linear() - demo_norm));

    std::vector<double> taus;
    for (int n = 1; n <= 30; ++n) taus.push_back(std::log(n + 1.0));
    const auto synth = records_from_pairs(lemma1_pairs(Potential::zero(), 0.0, taus, {1.0, 1.0, 1.0, 1.0}, true));
    for (const auto& r : synth) audit(r);

    o.check(max_gap < 1e-10, "maximizer attains the norm to " + sci(max_gap) + " (log)");
    o.check(bound, fmt::format("chain |y||z| >= component bound >= |y||z|/(2 sqrt 2) on {} pairs",
                               synth.size() + demo_spectrum().records.size()));
    o.check(demo_err < 1e-7, "demo norms vs 3/(4 ln 2): max err " + sci(demo_err));
    const auto rep = divergence_witness(synth, std::nullopt, false);
    o.check(rep.verdict == Verdict::unbounded_trend,
            fmt::format("synthetic tau_n = log(n+1): verdict {} (tail rise {:.3f})", to_string(rep.verdict), rep.tail_rise));
    const double rise = rep.log_norms.back() - rep.log_norms.front();
    const double need = pi * (taus.back() - taus.front()) / 2;
    o.check(rise >= need, fmt::format("log norm rise {:.3f} >= pi (tau_max - tau_min)/2 = {:.3f}", rise, need));
    o.check(divergence_witness(demo_spectrum().records).verdict == Verdict::bounded, "demo system verdict bounded");
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome ac11() {
    Outcome o;
    const fs::path src = DIRAC_SOURCE_DIR;
    const fs::path scratch = fs::temp_directory_path() / "dirac_acceptance_golden";
    fs::remove_all(scratch);
    int compared = 0;
    std::ostringstream log;
    for (const auto& entry : fs::directory_iterator(src / "demos")) {
        if (entry.path().extension() != ".toml") continue;
        const std::string name = entry.path().stem().string();
        auto cfg = cli::load_config(entry.path());
        cfg.output = (scratch / name).string();
        cli::run_command(cfg.command, cfg, log);
        // manifest round-trip: rerun from the emitted manifest
        auto again = cli::load_config(scratch / name / "manifest.toml");
        again.output = (scratch / (name + ".again")).string();
        cli::run_command(again.command, again, log);
        for (const auto& g : fs::directory_iterator(src / "tests" / "golden" / name)) {
            const auto fresh = slurp(scratch / name / g.path().filename());
            const bool same = fresh == slurp(g.path());
            const bool round = fresh == slurp(scratch / (name + ".again") / g.path().filename());
            if (!same || !round) o.check(false, fmt::format("{}/{}: golden {} round-trip {}", name, g.path().filename().string(), same, round));
            ++compared;
        }
    }
    o.check(compared > 0, fmt::format("{} golden CSVs reproduced bitwise, including manifest reruns", compared));
    fs::remove_all(scratch);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<std::string> known_red;
    for (int i = 1; i + 1 < argc; i += 2) {
        if (std::string(argv[i]) == "--known-red") {
            std::stringstream ss(argv[i + 1]);
            for (std::string id; std::getline(ss, id, ',');) known_red.insert(id);
        }
    }

    // AC4 goes last: it audits every solve made by the others.
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC5", ac5}, {"AC6", ac6}, {"AC7", ac7},
        {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}, {"AC11", ac11}, {"AC4", ac4}};
    const std::map<std::string, double> budget{{"AC1", 5}, {"AC2", 10}, {"AC6", 60}};

    int unexpected = 0;
    for (const auto& [id, run] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (auto b = budget.find(id); b != budget.end()) o.check(secs < b->second, fmt::format("runtime < {} s", b->second));
        const bool red = known_red.contains(id);
        std::cout << fmt::format("{:<5} {} ({:.2f} s){}\n", id, o.pass ? "PASS" : "FAIL", secs,
                                 red ? (o.pass ? " [listed as known red, now passes]" : " [known red]") : "");
        for (const auto& n : o.notes) std::cout << "        " << n << "\n";
        if (o.pass == red) ++unexpected;
    }
    std::cout.flush();
    return unexpected == 0 ? 0 : 1;
}
