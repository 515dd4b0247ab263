#pragma once

#include <limits>
#include <string>

namespace fconc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// An interval of the real line with nonempty interior.
///
/// Unbounded ends are stored as IEEE infinities and are always open.
class Interval {
 public:
  Interval(double lo, double hi, bool lo_closed, bool hi_closed);

  static Interval closed(double lo, double hi) { return {lo, hi, true, true}; }
  static Interval open(double lo, double hi) { return {lo, hi, false, false}; }
  /// [lo, +inf)
  static Interval half_line(double lo) { return {lo, kInf, true, false}; }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool lo_closed() const { return lo_closed_; }
  bool hi_closed() const { return hi_closed_; }

  bool contains(double t) const;
  bool contains_interior(double t) const { return t > lo_ && t < hi_; }
  /// J is a subset of this interval.
  bool contains(const Interval& j) const;

  bool operator==(const Interval&) const = default;

  /// "[0, inf)", "(0, 1]" ...
  std::string to_string() const;

 private:
  double lo_;
  double hi_;
  bool lo_closed_;
  bool hi_closed_;
};

}  // namespace fconc
