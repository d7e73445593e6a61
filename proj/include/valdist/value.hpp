#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace valdist {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double inf = std::numeric_limits<double>::infinity();

/// Returned (conceptually) instead of a number when a point sits on a pole.
struct PoleMarker {};

/// A meromorphic function value held as `factor * exp(exponent)`.
///
/// The split lets functions such as exp(3 e^w) be evaluated where the value
/// itself overflows a double: log|f| = Re(exponent) + log|factor| is always
/// available. Constructors guarantee that Im(exponent) varies continuously
/// with the evaluation point (it is a single-valued analytic or real
/// function on the handle's domain), so the argument of the value can be
/// unwound from `factor` alone. Real parts may jump freely.
class Value {
 public:
  /// The zero value.
  constexpr Value() = default;

  static Value of(cplx v) {
    Value r;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      r.pole_ = true;
      return r;
    }
    r.factor_ = v;
    return r;
  }

  static Value exp_of(cplx exponent, cplx factor = 1.0) {
    Value r;
    r.exponent_ = exponent;
    r.factor_ = factor;
    if (!std::isfinite(factor.real()) || !std::isfinite(factor.imag())) r.pole_ = true;
    r.normalize();
    return r;
  }

  static Value pole() {
    Value r;
    r.pole_ = true;
    return r;
  }

  [[nodiscard]] bool is_pole() const { return pole_; }
  [[nodiscard]] bool is_zero() const { return !pole_ && factor_ == cplx{}; }
  [[nodiscard]] cplx exponent() const { return exponent_; }
  [[nodiscard]] cplx factor() const { return factor_; }

  /// log|f|; +inf at a pole and -inf at a zero.
  [[nodiscard]] double log_abs() const {
    if (pole_) return inf;
    if (factor_ == cplx{}) return -inf;
    return exponent_.real() + std::log(std::abs(factor_));
  }

  /// Principal argument of the full value.
  [[nodiscard]] double phase() const {
    return std::remainder(std::arg(factor_) + exponent_.imag(), two_pi);
  }

  /// factor * exp(i Im exponent): carries the true phase and a bounded modulus.
  [[nodiscard]] cplx scaled() const { return factor_ * std::polar(1.0, exponent_.imag()); }

  /// The plain complex number; components overflow to inf where |f| does.
  [[nodiscard]] cplx to_complex() const {
    if (pole_) return {inf, inf};
    if (std::abs(exponent_.real()) < 700.0) return std::exp(exponent_) * factor_;
    if (factor_ == cplx{}) return {};
    return std::polar(std::exp(log_abs()), phase());
  }

  [[nodiscard]] Value inverse() const {
    if (pole_) return Value{};
    if (is_zero()) return pole();
    return exp_of(-exponent_, 1.0 / factor_);
  }

  [[nodiscard]] Value times(cplx c) const {
    if (pole_) return *this;
    return exp_of(exponent_, factor_ * c);
  }

  /// f - a. Keeps the exponent (and therefore the phase bookkeeping) unless
  /// f is so small that exp(-exponent) would overflow.
  [[nodiscard]] Value minus(cplx a) const {
    if (pole_ || a == cplx{}) return *this;
    if (exponent_.real() < -600.0) return of(to_complex() - a);
    return exp_of(exponent_, factor_ - a * std::exp(-exponent_));
  }

  friend Value operator*(const Value& x, const Value& y) {
    if (x.pole_ || y.pole_) return pole();
    return exp_of(x.exponent_ + y.exponent_, x.factor_ * y.factor_);
  }
  friend Value operator/(const Value& x, const Value& y) { return x * y.inverse(); }

 private:
  void normalize() {
    if (pole_ || factor_ == cplx{}) return;
    const double m = std::abs(factor_);
    if (!(m > 1e-150 && m < 1e150)) {
      exponent_ += std::log(m);
      factor_ /= m;
    }
  }

  cplx exponent_{};
  cplx factor_{};
  bool pole_ = false;
};

/// sin(a) with the growth e^{|Im a|} held in the (real) exponent.
inline Value sin_value(cplx a) {
  const double s = std::abs(a.imag());
  const cplx ia{-a.imag(), a.real()};
  return Value::exp_of(s, (std::exp(ia - s) - std::exp(-ia - s)) / cplx{0.0, 2.0});
}

/// cos(a) with the growth e^{|Im a|} held in the (real) exponent.
inline Value cos_value(cplx a) {
  const double s = std::abs(a.imag());
  const cplx ia{-a.imag(), a.real()};
  return Value::exp_of(s, (std::exp(ia - s) + std::exp(-ia - s)) / 2.0);
}

inline double log_plus(double log_abs) { return log_abs > 0.0 ? log_abs : 0.0; }

/// log sqrt(1 + |f|^2) from log|f|, overflow-free.
inline double log_sqrt_one_plus_sq(double log_abs) {
  if (log_abs == inf) return inf;
  if (log_abs > 0.0) return log_abs + 0.5 * std::log1p(std::exp(-2.0 * log_abs));
  return 0.5 * std::log1p(std::exp(2.0 * log_abs));
}

}  // namespace valdist
