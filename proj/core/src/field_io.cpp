#include "fconc/field_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "fconc/errors.hpp"

namespace fconc {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_field_csv(std::ostream& os, const Field& f) {
  const Domain& d = f.domain();
  os << (d.dimension() == 1 ? "x,value\n" : "x,y,value\n");
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (!d.inside(k)) continue;
    const Point p = d.point(k);
    os << format_double(p.x) << ',';
    if (d.dimension() == 2) os << format_double(p.y) << ',';
    os << format_double(f[k]) << '\n';
  }
}

std::string field_to_csv(const Field& f) {
  std::ostringstream os;
  write_field_csv(os, f);
  return os.str();
}

namespace {

std::vector<double> split_numbers(const std::string& line, const std::string& where) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= line.size()) {
    std::size_t end = line.find(',', start);
    if (end == std::string::npos) end = line.size();
    std::string_view tok(line.data() + start, end - start);
    while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
    while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r'))
      tok.remove_suffix(1);
    double v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size())
      throw PreconditionError(where + ": cannot parse number '" + std::string(tok) + "'");
    out.push_back(v);
    start = end + 1;
  }
  return out;
}

}  // namespace

Field read_field_csv(std::istream& is, const std::optional<Domain>& domain, const std::string& source,
                     const Interval& range) {
  std::string header;
  if (!std::getline(is, header)) throw PreconditionError(source + ": empty field file");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  int dim = 0;
  if (header == "x,value") dim = 1;
  else if (header == "x,y,value") dim = 2;
  else throw PreconditionError(source + ": expected header 'x,value' or 'x,y,value', got '" + header + "'");

  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> line_of;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const std::string where = source + ":" + std::to_string(lineno);
    auto nums = split_numbers(line, where);
    if (nums.size() != static_cast<std::size_t>(dim + 1))
      throw PreconditionError(where + ": expected " + std::to_string(dim + 1) + " columns");
    rows.push_back(std::move(nums));
    line_of.push_back(lineno);
  }

  if (!domain) {
    if (dim == 2) throw PreconditionError(source + ": a 2D field needs a domain descriptor");
    if (rows.size() < 3) throw PreconditionError(source + ": need at least 3 rows");
    const Domain d = Domain::interval(rows.front()[0], rows.back()[0], rows.size());
    std::vector<double> v(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const double expect = d.x_at(k);
      if (std::abs(rows[k][0] - expect) > 1e-9 * (d.hi() - d.lo()))
        throw PreconditionError(source + ":" + std::to_string(line_of[k]) + ": x=" + format_double(rows[k][0]) +
                                " is off the uniform grid");
      v[k] = rows[k][1];
    }
    return Field(d, std::move(v), range);
  }

  const Domain& d = *domain;
  if (d.dimension() != dim)
    throw PreconditionError(source + ": file is " + std::to_string(dim) + "D but the domain is " +
                            std::to_string(d.dimension()) + "D");
  if (rows.size() != d.count_inside())
    throw PreconditionError(source + ": " + std::to_string(rows.size()) + " rows, domain has " +
                            std::to_string(d.count_inside()) + " inside nodes");
  std::vector<double> v(d.size(), 0.0);
  std::size_t r = 0;
  const double tol = 1e-9 * std::max(d.hx(), 1e-300);
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (!d.inside(k)) continue;
    const Point p = d.point(k);
    const auto& row = rows[r];
    if (std::abs(row[0] - p.x) > tol || (dim == 2 && std::abs(row[1] - p.y) > tol))
      throw PreconditionError(source + ":" + std::to_string(line_of[r]) +
                              ": coordinates do not match the domain grid");
    v[k] = row.back();
    ++r;
  }
  return Field(d, std::move(v), range);
}

}  // namespace fconc
