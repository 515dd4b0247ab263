#include "fconc/domain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fconc/errors.hpp"

namespace fconc {

namespace {

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::size_t nodes_for_spacing(double length, double h, bool exact) {
  const double ratio = length / h;
  const double r = std::round(ratio);
  if (exact) {
    if (std::abs(r - ratio) > 1e-9 * std::max(1.0, ratio))
      throw PreconditionError("grid spacing " + std::to_string(h) + " does not divide length " +
                              std::to_string(length));
    return static_cast<std::size_t>(r) + 1;
  }
  if (std::abs(r - ratio) <= 1e-9 * std::max(1.0, ratio)) return static_cast<std::size_t>(r) + 1;
  return static_cast<std::size_t>(std::floor(ratio)) + 1;
}

}  // namespace

Domain Domain::interval(double lo, double hi, std::size_t n_nodes) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi))
    throw PreconditionError("interval domain needs finite lo < hi");
  if (n_nodes < 3) throw PreconditionError("interval domain needs at least 3 nodes");
  Domain d;
  d.kind_ = Kind::interval;
  d.lo_ = lo;
  d.hi_ = hi;
  d.nx_ = n_nodes;
  d.ny_ = 1;
  d.h_ = (hi - lo) / static_cast<double>(n_nodes - 1);
  d.mask_.assign(n_nodes, 2);
  d.mask_.front() = 1;
  d.mask_.back() = 1;
  return d;
}

Domain Domain::interval_with_spacing(double lo, double hi, double h) {
  if (!(h > 0)) throw PreconditionError("grid spacing must be positive");
  if (!(lo < hi)) throw PreconditionError("interval domain needs lo < hi");
  return interval(lo, hi, nodes_for_spacing(hi - lo, h, true));
}

Domain Domain::polygon(std::vector<Point> vertices, double h) {
  if (vertices.size() < 3) throw PreconditionError("polygon needs at least 3 vertices");
  if (!(h > 0)) throw PreconditionError("grid spacing must be positive");
  const std::size_t nv = vertices.size();
  bool any_turn = false;
  for (std::size_t k = 0; k < nv; ++k) {
    const double c = cross(vertices[k], vertices[(k + 1) % nv], vertices[(k + 2) % nv]);
    if (c < 0)
      throw PreconditionError("polygon is not convex and counterclockwise at vertex " +
                              std::to_string((k + 1) % nv));
    if (c > 0) any_turn = true;
  }
  if (!any_turn) throw PreconditionError("polygon vertices are collinear");

  Domain d;
  d.kind_ = Kind::polygon;
  d.h_ = h;
  d.lo_ = d.hi_ = vertices[0].x;
  d.ylo_ = d.yhi_ = vertices[0].y;
  for (const Point& p : vertices) {
    d.lo_ = std::min(d.lo_, p.x);
    d.hi_ = std::max(d.hi_, p.x);
    d.ylo_ = std::min(d.ylo_, p.y);
    d.yhi_ = std::max(d.yhi_, p.y);
  }
  d.nx_ = nodes_for_spacing(d.hi_ - d.lo_, h, false);
  d.ny_ = nodes_for_spacing(d.yhi_ - d.ylo_, h, false);
  d.vertices_ = std::move(vertices);

  const double scale = std::max(d.hi_ - d.lo_, d.yhi_ - d.ylo_);
  const double eps = 1e-12 * scale * scale;
  d.mask_.assign(d.nx_ * d.ny_, 0);
  for (std::size_t k = 0; k < d.mask_.size(); ++k) {
    const Point p = d.point(k);
    bool in = true;
    bool strict = true;
    for (std::size_t e = 0; e < nv && in; ++e) {
      const double c = cross(d.vertices_[e], d.vertices_[(e + 1) % nv], p);
      if (c < -eps) in = false;
      if (c <= eps) strict = false;
    }
    d.mask_[k] = in ? (strict ? 2 : 1) : 0;
  }
  return d;
}

Domain Domain::unit_square(double h) {
  return polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, h);
}

double Domain::hx() const { return h_; }
double Domain::hy() const { return kind_ == Kind::interval ? 0.0 : h_; }

double Domain::x_at(std::size_t i) const {
  if (kind_ == Kind::interval) {
    if (i + 1 == nx_) return hi_;
    return lo_ + (hi_ - lo_) * static_cast<double>(i) / static_cast<double>(nx_ - 1);
  }
  return lo_ + h_ * static_cast<double>(i);
}

double Domain::y_at(std::size_t j) const {
  return kind_ == Kind::interval ? 0.0 : ylo_ + h_ * static_cast<double>(j);
}

Point Domain::point(std::size_t node) const { return {x_at(node % nx_), y_at(node / nx_)}; }

std::size_t Domain::count_inside() const {
  return static_cast<std::size_t>(std::count_if(mask_.begin(), mask_.end(), [](unsigned char m) { return m != 0; }));
}

std::string Domain::describe() const {
  std::ostringstream os;
  if (kind_ == Kind::interval) {
    os << "interval [" << lo_ << ", " << hi_ << "] with " << nx_ << " nodes";
  } else {
    os << "polygon with " << vertices_.size() << " vertices, " << nx_ << "x" << ny_ << " grid, h=" << h_;
  }
  return os.str();
}

void to_json(nlohmann::json& j, const Domain& d) {
  if (d.kind() == Domain::Kind::interval) {
    j = {{"kind", "interval"}, {"lo", d.lo()}, {"hi", d.hi()}, {"n", d.nx()}};
    return;
  }
  nlohmann::json verts = nlohmann::json::array();
  for (const Point& p : d.vertices()) verts.push_back({p.x, p.y});
  j = {{"kind", "polygon"}, {"vertices", verts}, {"h", d.hx()}};
}

Domain domain_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "interval") {
      const double lo = j.at("lo").get<double>();
      const double hi = j.at("hi").get<double>();
      if (j.contains("n")) return Domain::interval(lo, hi, j.at("n").get<std::size_t>());
      if (j.contains("h")) return Domain::interval_with_spacing(lo, hi, j.at("h").get<double>());
      throw PreconditionError("interval domain needs \"n\" or \"h\"");
    }
    if (kind == "polygon") {
      std::vector<Point> verts;
      for (const auto& v : j.at("vertices")) verts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
      return Domain::polygon(std::move(verts), j.at("h").get<double>());
    }
    throw PreconditionError("unknown domain kind \"" + kind + "\"");
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed domain JSON: ") + e.what());
  }
}

}  // namespace fconc
