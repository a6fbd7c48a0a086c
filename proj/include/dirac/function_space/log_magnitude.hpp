#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace dirac {

using Complex = std::complex<double>;

/// Nonnegative magnitude stored as its natural logarithm.
///
/// -infinity encodes an exact zero. Products and sums never leave the log
/// domain, so values like e^{700} can be combined without overflow.
class LogMagnitude {
public:
    constexpr LogMagnitude() = default;

    static constexpr LogMagnitude from_log(double log_value) { return LogMagnitude(log_value); }
    static LogMagnitude from_linear(double value);
    static constexpr LogMagnitude zero() { return LogMagnitude(-std::numeric_limits<double>::infinity()); }
    static constexpr LogMagnitude one() { return LogMagnitude(0.0); }

    constexpr double log() const { return log_value_; }
    bool is_zero() const { return std::isinf(log_value_) && log_value_ < 0; }

    /// True when exp(log()) is a finite double.
    bool representable() const { return log_value_ < kMaxLog; }

    /// Linear value, +infinity when not representable.
    double linear() const;

    LogMagnitude sqrt() const { return LogMagnitude(0.5 * log_value_); }
    LogMagnitude pow(double exponent) const;

    friend LogMagnitude operator*(LogMagnitude a, LogMagnitude b);
    friend LogMagnitude operator/(LogMagnitude a, LogMagnitude b);
    friend LogMagnitude operator+(LogMagnitude a, LogMagnitude b);

    friend bool operator<(LogMagnitude a, LogMagnitude b) { return a.log_value_ < b.log_value_; }
    friend bool operator>(LogMagnitude a, LogMagnitude b) { return b < a; }
    friend bool operator<=(LogMagnitude a, LogMagnitude b) { return !(b < a); }
    friend bool operator>=(LogMagnitude a, LogMagnitude b) { return !(a < b); }

    static constexpr double kMaxLog = 709.782712893384;

private:
    constexpr explicit LogMagnitude(double log_value) : log_value_(log_value) {}

    double log_value_ = -std::numeric_limits<double>::infinity();
};

/// Complex number stored as unit phase times exp(log magnitude).
class LogComplex {
public:
    LogComplex() = default;

    static LogComplex from_complex(Complex value);
    /// exp(z) without forming it in linear scale.
    static LogComplex exp(Complex z);
    static LogComplex zero() { return LogComplex(); }

    Complex phase() const { return phase_; }
    LogMagnitude magnitude() const { return LogMagnitude::from_log(log_mag_); }
    double log_abs() const { return log_mag_; }
    bool is_zero() const { return phase_ == Complex(0.0, 0.0); }

    /// Linear value; components become +-infinity when not representable.
    Complex to_complex() const;
    /// Value multiplied by exp(-log_shift), for rescaled arithmetic.
    Complex scaled(double log_shift) const;

    LogComplex conj() const;

    friend LogComplex operator*(const LogComplex& a, const LogComplex& b);
    friend LogComplex operator/(const LogComplex& a, const LogComplex& b);
    friend LogComplex operator+(const LogComplex& a, const LogComplex& b);
    friend LogComplex operator-(const LogComplex& a);
    friend LogComplex operator-(const LogComplex& a, const LogComplex& b) { return a + (-b); }

private:
    LogComplex(Complex phase, double log_mag) : phase_(phase), log_mag_(log_mag) {}

    Complex phase_{0.0, 0.0};
    double log_mag_ = -std::numeric_limits<double>::infinity();
};

}  // namespace dirac
