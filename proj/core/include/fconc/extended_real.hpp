#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <ostream>

#include "fconc/errors.hpp"

namespace fconc {

/// A real number or negative infinity.
///
/// Transforms map the closed lower endpoint of some intervals to -inf
/// (log at 0, L_alpha at 0 for alpha >= 0, the starred powers). The marker is
/// an explicit flag, never an IEEE infinity, so arithmetic follows the
/// conventions below instead of producing NaN:
///
///   (-inf) + r = -inf,   a * (-inf) = -inf for a > 0,   0 * (-inf) = 0.
///
/// Subtracting -inf is not defined by these conventions and throws.
template <class T>
class BasicExtended {
 public:
  BasicExtended() : value_(0), minus_inf_(false) {}
  BasicExtended(const T& v) : value_(v), minus_inf_(false) {}  // NOLINT

  static BasicExtended minus_infinity() {
    BasicExtended r;
    r.minus_inf_ = true;
    return r;
  }

  bool is_minus_infinity() const { return minus_inf_; }
  bool is_finite() const { return !minus_inf_; }

  /// Finite value; throws on -inf.
  const T& value() const {
    if (minus_inf_) throw DomainError("value() called on -inf");
    return value_;
  }

  /// Finite value, or the IEEE -inf when asked for a plain double.
  double to_double() const {
    if (minus_inf_) return -std::numeric_limits<double>::infinity();
    return static_cast<double>(value_);
  }

  friend BasicExtended operator+(const BasicExtended& a, const BasicExtended& b) {
    if (a.minus_inf_ || b.minus_inf_) return minus_infinity();
    return BasicExtended(a.value_ + b.value_);
  }

  friend BasicExtended operator-(const BasicExtended& a, const T& b) {
    if (a.minus_inf_) return minus_infinity();
    return BasicExtended(a.value_ - b);
  }

  /// Scaling by a nonnegative factor.
  friend BasicExtended operator*(const T& a, const BasicExtended& x) {
    if (a < 0) throw DomainError("extended-real scaling by a negative factor");
    if (x.minus_inf_) return a == 0 ? BasicExtended(T(0)) : minus_infinity();
    return BasicExtended(a * x.value_);
  }

  friend bool operator==(const BasicExtended& a, const BasicExtended& b) {
    if (a.minus_inf_ || b.minus_inf_) return a.minus_inf_ == b.minus_inf_;
    return a.value_ == b.value_;
  }

  /// Total order: -inf below every real.
  friend bool operator<(const BasicExtended& a, const BasicExtended& b) {
    if (a.minus_inf_) return !b.minus_inf_;
    if (b.minus_inf_) return false;
    return a.value_ < b.value_;
  }
  friend bool operator>(const BasicExtended& a, const BasicExtended& b) { return b < a; }
  friend bool operator<=(const BasicExtended& a, const BasicExtended& b) { return !(b < a); }
  friend bool operator>=(const BasicExtended& a, const BasicExtended& b) { return !(a < b); }

  friend std::ostream& operator<<(std::ostream& os, const BasicExtended& x) {
    if (x.minus_inf_) return os << "-inf";
    return os << x.value_;
  }

 private:
  T value_;
  bool minus_inf_;
};

using ExtendedReal = BasicExtended<double>;

}  // namespace fconc
