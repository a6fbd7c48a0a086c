#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "dirac/function_space/log_magnitude.hpp"

namespace dirac {

/// Off-diagonal Dirac potential V = ((0, P), (Q, 0)) on [0, pi].
class Potential {
public:
    struct Zero {
        bool operator==(const Zero&) const = default;
    };
    struct Constant {
        Complex p;
        Complex q;
        bool operator==(const Constant&) const = default;
    };
    struct Term {
        int frequency;  ///< contributes coeff * e^{i frequency x}
        Complex coeff;
        bool operator==(const Term&) const = default;
    };
    struct TrigPoly {
        std::vector<Term> p;
        std::vector<Term> q;
        bool operator==(const TrigPoly&) const = default;
    };
    /// Piecewise-linear interpolation of samples covering [0, pi].
    struct Sampled {
        std::vector<double> x;
        std::vector<Complex> p;
        std::vector<Complex> q;
        bool operator==(const Sampled&) const = default;
    };
    using Variant = std::variant<Zero, Constant, TrigPoly, Sampled>;

    Potential() = default;
    Potential(Variant v);

    static Potential zero() { return Potential(Zero{}); }
    static Potential constant(Complex p, Complex q) { return Potential(Constant{p, q}); }
    static Potential trig(std::vector<Term> p, std::vector<Term> q) {
        return Potential(TrigPoly{std::move(p), std::move(q)});
    }
    /// Validates that x is strictly increasing and covers [0, pi].
    static Potential sampled(std::vector<double> x, std::vector<Complex> p, std::vector<Complex> q);
    /// Reads a CSV with header x,re_p,im_p,re_q,im_q.
    static Potential from_csv(const std::filesystem::path& path);

    const Variant& variant() const { return v_; }
    bool is_zero() const { return std::holds_alternative<Zero>(v_); }
    std::string kind() const;

    Complex p(double x) const;
    Complex q(double x) const;

    /// L1(0, pi) norms of P and Q by fine trapezoid sampling.
    double l1_norm_p() const;
    double l1_norm_q() const;

    bool operator==(const Potential&) const = default;

private:
    Variant v_{Zero{}};
};

/// V* = ((0, conj Q), (conj P, 0)).
Potential adjoint_potential(const Potential& v);

}  // namespace dirac
