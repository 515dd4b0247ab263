#include "fconc/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fconc/errors.hpp"

namespace fconc {

Field::Field(Domain domain, std::vector<double> values, Interval range)
    : domain_(std::move(domain)), values_(std::move(values)), range_(range) {
  if (values_.size() != domain_.size())
    throw PreconditionError("field has " + std::to_string(values_.size()) + " values, domain has " +
                            std::to_string(domain_.size()) + " nodes");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!domain_.inside(k)) {
      values_[k] = 0.0;
      continue;
    }
    if (!std::isfinite(values_[k]) || !range_.contains(values_[k])) {
      std::ostringstream os;
      const Point p = domain_.point(k);
      os << "field value " << values_[k] << " at node " << k << " (x=" << p.x;
      if (domain_.dimension() == 2) os << ", y=" << p.y;
      os << ") outside range " << range_.to_string();
      throw PreconditionError(os.str());
    }
  }
}

Field Field::sample(const Domain& domain, ClosedForm f, Interval range) {
  std::vector<double> v(domain.size(), 0.0);
  for (std::size_t k = 0; k < v.size(); ++k)
    if (domain.inside(k)) v[k] = f(domain.point(k));
  Field out(domain, std::move(v), range);
  out.closed_form_ = std::move(f);
  return out;
}

Field Field::map(const std::function<double(double)>& op, Interval new_range) const {
  std::vector<double> v(values_.size(), 0.0);
  for (std::size_t k = 0; k < v.size(); ++k)
    if (domain_.inside(k)) v[k] = op(values_[k]);
  Field out(domain_, std::move(v), new_range);
  if (closed_form_) {
    ClosedForm inner = *closed_form_;
    out.closed_form_ = [inner, op](Point p) { return op(inner(p)); };
  }
  return out;
}

double Field::sup() const {
  double s = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < values_.size(); ++k)
    if (domain_.inside(k)) s = std::max(s, values_[k]);
  return s;
}

double Field::inf() const {
  double s = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < values_.size(); ++k)
    if (domain_.inside(k)) s = std::min(s, values_[k]);
  return s;
}

double Field::mass() const {
  // Riemann sum over inside nodes
  double m = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k)
    if (domain_.inside(k)) m += values_[k];
  const double cell = domain_.dimension() == 1 ? domain_.hx() : domain_.hx() * domain_.hy();
  return m * cell;
}

std::optional<std::size_t> first_range_exit(const Field& f, const Interval& range) {
  for (std::size_t k = 0; k < f.values().size(); ++k)
    if (f.domain().inside(k) && !range.contains(f[k])) return k;
  return std::nullopt;
}

}  // namespace fconc
