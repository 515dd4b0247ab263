#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "fconc/domain.hpp"
#include "fconc/interval.hpp"

namespace fconc {

using ClosedForm = std::function<double(Point)>;

/// Grid samples of a function on a Domain. Only nodes inside the domain
/// carry data; the rest hold 0 and are ignored. Fields store f itself, never
/// F(f), so values are always finite.
class Field {
 public:
  /// Throws PreconditionError if a value inside the domain is non-finite or
  /// falls outside `range`.
  Field(Domain domain, std::vector<double> values, Interval range = Interval::half_line(0.0));

  static Field sample(const Domain& domain, ClosedForm f, Interval range = Interval::half_line(0.0));

  const Domain& domain() const { return domain_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t node) const { return values_[node]; }
  const Interval& range() const { return range_; }

  const std::optional<ClosedForm>& closed_form() const { return closed_form_; }

  /// New field with v -> op(v) applied at every inside node. The closed form
  /// is composed when present.
  Field map(const std::function<double(double)>& op, Interval new_range) const;

  double sup() const;
  double inf() const;
  double mass() const;

 private:
  Domain domain_;
  std::vector<double> values_;
  Interval range_;
  std::optional<ClosedForm> closed_form_;
};

/// First inside node whose value leaves `range`, if any.
std::optional<std::size_t> first_range_exit(const Field& f, const Interval& range);

}  // namespace fconc
