#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "fconc/domain.hpp"
#include "fconc/field.hpp"

namespace fconc {

/// CSV with header `x,value` (1D) or `x,y,value` (2D), one inside node per
/// row in row-major order. Numbers use the shortest round-trip form, so a
/// read followed by a write reproduces the file byte for byte.
void write_field_csv(std::ostream& os, const Field& f);
std::string field_to_csv(const Field& f);

/// Without a domain the file must be 1D; the grid is rebuilt from the first
/// and last x and the row count. With a domain, the coordinates are matched
/// against its inside nodes. Errors name the source and the line. Values
/// must lie in `range`.
Field read_field_csv(std::istream& is, const std::optional<Domain>& domain = std::nullopt,
                     const std::string& source = "<stream>", const Interval& range = Interval::half_line(0.0));

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace fconc
