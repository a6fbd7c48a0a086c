#include "dirac/function_space/log_magnitude.hpp"

#include <algorithm>

namespace dirac {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_neg_inf(double v) { return std::isinf(v) && v < 0; }
}  // namespace

LogMagnitude LogMagnitude::from_linear(double value) {
    if (value <= 0.0) return zero();
    return LogMagnitude(std::log(value));
}

double LogMagnitude::linear() const {
    if (is_neg_inf(log_value_)) return 0.0;
    if (!representable()) return kInf;
    return std::exp(log_value_);
}

LogMagnitude LogMagnitude::pow(double exponent) const {
    if (is_neg_inf(log_value_)) return exponent > 0 ? zero() : one();
    return LogMagnitude(exponent * log_value_);
}

LogMagnitude operator*(LogMagnitude a, LogMagnitude b) {
    if (a.is_zero() || b.is_zero()) return LogMagnitude::zero();
    return LogMagnitude(a.log_value_ + b.log_value_);
}

LogMagnitude operator/(LogMagnitude a, LogMagnitude b) {
    if (a.is_zero()) return LogMagnitude::zero();
    return LogMagnitude(a.log_value_ - b.log_value_);
}

LogMagnitude operator+(LogMagnitude a, LogMagnitude b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const double hi = std::max(a.log_value_, b.log_value_);
    const double lo = std::min(a.log_value_, b.log_value_);
    return LogMagnitude(hi + std::log1p(std::exp(lo - hi)));
}

LogComplex LogComplex::from_complex(Complex value) {
    const double r = std::abs(value);
    if (r == 0.0) return zero();
    return LogComplex(value / r, std::log(r));
}

LogComplex LogComplex::exp(Complex z) {
    return LogComplex(std::polar(1.0, z.imag()), z.real());
}

Complex LogComplex::to_complex() const {
    if (is_zero()) return {0.0, 0.0};
    if (log_mag_ >= LogMagnitude::kMaxLog) {
        auto inf_part = [](double c) { return c == 0.0 ? 0.0 : std::copysign(kInf, c); };
        return {inf_part(phase_.real()), inf_part(phase_.imag())};
    }
    return phase_ * std::exp(log_mag_);
}

Complex LogComplex::scaled(double log_shift) const {
    if (is_zero()) return {0.0, 0.0};
    return phase_ * std::exp(log_mag_ - log_shift);
}

LogComplex LogComplex::conj() const { return LogComplex(std::conj(phase_), log_mag_); }

LogComplex operator*(const LogComplex& a, const LogComplex& b) {
    if (a.is_zero() || b.is_zero()) return LogComplex::zero();
    Complex p = a.phase_ * b.phase_;
    p /= std::abs(p);
    return LogComplex(p, a.log_mag_ + b.log_mag_);
}

LogComplex operator/(const LogComplex& a, const LogComplex& b) {
    if (a.is_zero()) return LogComplex::zero();
    Complex p = a.phase_ / b.phase_;
    p /= std::abs(p);
    return LogComplex(p, a.log_mag_ - b.log_mag_);
}

LogComplex operator+(const LogComplex& a, const LogComplex& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const double shift = std::max(a.log_mag_, b.log_mag_);
    const Complex sum = a.scaled(shift) + b.scaled(shift);
    const double r = std::abs(sum);
    if (r == 0.0) return LogComplex::zero();
    return LogComplex(sum / r, shift + std::log(r));
}

LogComplex operator-(const LogComplex& a) { return LogComplex(-a.phase_, a.log_mag_); }

}  // namespace dirac
