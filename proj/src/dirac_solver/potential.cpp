#include "dirac/dirac_solver/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dirac/errors.hpp"

namespace dirac {

namespace {

constexpr double kCoverTolerance = 1e-9;

Complex eval_terms(const std::vector<Potential::Term>& terms, double x) {
    Complex acc{};
    for (const auto& t : terms) acc += t.coeff * std::polar(1.0, static_cast<double>(t.frequency) * x);
    return acc;
}

Complex interpolate(const std::vector<double>& xs, const std::vector<Complex>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return (1.0 - t) * ys[lo] + t * ys[hi];
}

std::vector<Potential::Term> conjugate_terms(const std::vector<Potential::Term>& terms) {
    std::vector<Potential::Term> out;
    out.reserve(terms.size());
    for (const auto& t : terms) out.push_back({-t.frequency, std::conj(t.coeff)});
    return out;
}

std::vector<Complex> conjugate_values(const std::vector<Complex>& v) {
    std::vector<Complex> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [](Complex c) { return std::conj(c); });
    return out;
}

}  // namespace

Potential::Potential(Variant v) : v_(std::move(v)) {}

Potential Potential::sampled(std::vector<double> x, std::vector<Complex> p, std::vector<Complex> q) {
    if (x.size() < 2 || p.size() != x.size() || q.size() != x.size()) {
        throw InputError("sampled potential needs at least two rows with matching P and Q");
    }
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (!(x[i] > x[i - 1])) throw InputError("sampled potential nodes must be strictly increasing");
    }
    if (std::abs(x.front()) > kCoverTolerance || std::abs(x.back() - std::numbers::pi) > kCoverTolerance) {
        throw InputError("sampled potential nodes must cover [0, pi]");
    }
    return Potential(Sampled{std::move(x), std::move(p), std::move(q)});
}

Potential Potential::from_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open potential file " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw InputError(path.string() + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x,re_p,im_p,re_q,im_q") {
        throw InputError(path.string() + ":1: expected header x,re_p,im_p,re_q,im_q");
    }
    std::vector<double> xs;
    std::vector<Complex> ps;
    std::vector<Complex> qs;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        double v[5];
        std::string cell;
        for (int k = 0; k < 5; ++k) {
            if (!std::getline(row, cell, ',')) {
                throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected 5 columns");
            }
            try {
                std::size_t used = 0;
                v[k] = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw InputError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + cell + "'");
            }
        }
        xs.push_back(v[0]);
        ps.emplace_back(v[1], v[2]);
        qs.emplace_back(v[3], v[4]);
    }
    try {
        return sampled(std::move(xs), std::move(ps), std::move(qs));
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

std::string Potential::kind() const {
    return std::visit(
        [](const auto& alt) -> std::string {
            using T = std::decay_t<decltype(alt)>;
            if constexpr (std::is_same_v<T, Zero>) return "zero";
            else if constexpr (std::is_same_v<T, Constant>) return "constant";
            else if constexpr (std::is_same_v<T, TrigPoly>) return "trigpoly";
            else return "sampled";
        },
        v_);
}

Complex Potential::p(double x) const {
    return std::visit(
        [x](const auto& alt) -> Complex {
            using T = std::decay_t<decltype(alt)>;
            if constexpr (std::is_same_v<T, Zero>) return {};
            else if constexpr (std::is_same_v<T, Constant>) return alt.p;
            else if constexpr (std::is_same_v<T, TrigPoly>) return eval_terms(alt.p, x);
            else return interpolate(alt.x, alt.p, x);
        },
        v_);
}

Complex Potential::q(double x) const {
    return std::visit(
        [x](const auto& alt) -> Complex {
            using T = std::decay_t<decltype(alt)>;
            if constexpr (std::is_same_v<T, Zero>) return {};
            else if constexpr (std::is_same_v<T, Constant>) return alt.q;
            else if constexpr (std::is_same_v<T, TrigPoly>) return eval_terms(alt.q, x);
            else return interpolate(alt.x, alt.q, x);
        },
        v_);
}

namespace {
template <typename F>
double l1_trapezoid(F&& f) {
    constexpr int n = 4096;
    const double h = std::numbers::pi / n;
    double acc = 0.5 * (std::abs(f(0.0)) + std::abs(f(std::numbers::pi)));
    for (int i = 1; i < n; ++i) acc += std::abs(f(i * h));
    return acc * h;
}
}  // namespace

double Potential::l1_norm_p() const { return l1_trapezoid([this](double x) { return p(x); }); }
double Potential::l1_norm_q() const { return l1_trapezoid([this](double x) { return q(x); }); }

Potential adjoint_potential(const Potential& v) {
    return std::visit(
        [](const auto& alt) -> Potential {
            using T = std::decay_t<decltype(alt)>;
            if constexpr (std::is_same_v<T, Potential::Zero>) {
                return Potential::zero();
            } else if constexpr (std::is_same_v<T, Potential::Constant>) {
                return Potential::constant(std::conj(alt.q), std::conj(alt.p));
            } else if constexpr (std::is_same_v<T, Potential::TrigPoly>) {
                return Potential::trig(conjugate_terms(alt.q), conjugate_terms(alt.p));
            } else {
                return Potential(Potential::Sampled{alt.x, conjugate_values(alt.q), conjugate_values(alt.p)});
            }
        },
        v.variant());
}

}  // namespace dirac
