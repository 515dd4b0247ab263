#include "fconc/interval.hpp"

#include <cmath>
#include <sstream>

#include "fconc/errors.hpp"

namespace fconc {

Interval::Interval(double lo, double hi, bool lo_closed, bool hi_closed)
    : lo_(lo), hi_(hi), lo_closed_(lo_closed), hi_closed_(hi_closed) {
  if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) {
    throw PreconditionError("interval needs lo < hi, got " + std::to_string(lo) + ", " +
                            std::to_string(hi));
  }
  if (std::isinf(lo) && lo_closed) throw PreconditionError("an infinite endpoint cannot be closed");
  if (std::isinf(hi) && hi_closed) throw PreconditionError("an infinite endpoint cannot be closed");
}

bool Interval::contains(double t) const {
  if (std::isnan(t)) return false;
  if (t < lo_ || t > hi_) return false;
  if (t == lo_ && !lo_closed_) return false;
  if (t == hi_ && !hi_closed_) return false;
  return true;
}

bool Interval::contains(const Interval& j) const {
  const bool lo_ok = j.lo_ > lo_ || (j.lo_ == lo_ && (lo_closed_ || !j.lo_closed_));
  const bool hi_ok = j.hi_ < hi_ || (j.hi_ == hi_ && (hi_closed_ || !j.hi_closed_));
  return lo_ok && hi_ok;
}

std::string Interval::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << (lo_closed_ ? '[' : '(');
  if (std::isinf(lo_)) os << "-inf"; else os << lo_;
  os << ", ";
  if (std::isinf(hi_)) os << "inf"; else os << hi_;
  os << (hi_closed_ ? ']' : ')');
  return os.str();
}

}  // namespace fconc
