#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace fconc {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// A convex domain with a uniform grid: a 1D interval [lo, hi] with n nodes
/// (both ends included), or a convex polygon masked out of its bounding-box
/// grid. Node k sits at column k % nx, row k / nx.
class Domain {
 public:
  enum class Kind { interval, polygon };

  static Domain interval(double lo, double hi, std::size_t n_nodes);
  /// Spacing must divide hi - lo (to 1e-9 relative).
  static Domain interval_with_spacing(double lo, double hi, double h);
  /// Counterclockwise convex polygon, grid spacing h on both axes anchored
  /// at the lower-left corner of the bounding box.
  static Domain polygon(std::vector<Point> vertices, double h);
  static Domain unit_square(double h);

  Kind kind() const { return kind_; }
  int dimension() const { return kind_ == Kind::interval ? 1 : 2; }

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t size() const { return nx_ * ny_; }
  double hx() const;
  double hy() const;
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<Point>& vertices() const { return vertices_; }

  double x_at(std::size_t i) const;
  double y_at(std::size_t j) const;
  Point point(std::size_t node) const;
  std::size_t node(std::size_t i, std::size_t j = 0) const { return j * nx_ + i; }

  /// Node lies in the closed domain.
  bool inside(std::size_t node) const { return mask_[node] != 0; }
  /// Node lies in the open domain; boundary nodes carry Dirichlet data.
  bool interior(std::size_t node) const { return mask_[node] == 2; }
  std::size_t count_inside() const;

  std::string describe() const;

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  Domain() = default;

  Kind kind_ = Kind::interval;
  double lo_ = 0.0;
  double hi_ = 1.0;
  double ylo_ = 0.0;
  double yhi_ = 0.0;
  double h_ = 0.0;
  std::size_t nx_ = 0;
  std::size_t ny_ = 1;
  std::vector<Point> vertices_;
  // 0 outside, 1 on the boundary, 2 strictly inside
  std::vector<unsigned char> mask_;
};

void to_json(nlohmann::json& j, const Domain& d);
/// Accepts {"kind":"interval","lo","hi","n"|"h"} and
/// {"kind":"polygon","vertices":[[x,y],...],"h"}.
Domain domain_from_json(const nlohmann::json& j);

}  // namespace fconc
