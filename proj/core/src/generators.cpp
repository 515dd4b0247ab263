#include "fconc/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fconc/errors.hpp"

namespace fconc {

Field sample_f_concave(const Transform& F, const Domain& domain, std::uint64_t seed, std::size_t n_kinks) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  const std::vector<double> taus = interior_samples(F.interval(), 33);
  std::uniform_int_distribution<std::size_t> pick(0, taus.size() - 1);
  std::size_t ia = pick(rng);
  std::size_t ib = pick(rng);
  while (ib == ia) ib = pick(rng);
  if (ia > ib) std::swap(ia, ib);
  const double fa = F.eval(taus[ia]).value();
  const double fb = F.eval(taus[ib]).value();

  struct Piece {
    double c, vx, vy;
  };
  std::vector<Piece> pieces(n_kinks + 1);
  for (Piece& p : pieces) p = {unit(rng), normal(rng), domain.dimension() == 2 ? normal(rng) : 0.0};

  const double wx = domain.dimension() == 1 ? domain.hi() - domain.lo()
                                            : domain.x_at(domain.nx() - 1) - domain.x_at(0);
  const double wy = domain.dimension() == 1 ? 1.0 : domain.y_at(domain.ny() - 1) - domain.y_at(0);
  const double x0 = domain.x_at(0);
  const double y0 = domain.y_at(0);

  std::vector<double> raw(domain.size(), 0.0);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (!domain.inside(k)) continue;
    const Point p = domain.point(k);
    const double sx = (p.x - x0) / wx;
    const double sy = domain.dimension() == 2 ? (p.y - y0) / wy : 0.0;
    double g = std::numeric_limits<double>::infinity();
    for (const Piece& q : pieces) g = std::min(g, q.c + q.vx * sx + q.vy * sy);
    raw[k] = g;
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }

  // affine map of the range into the middle 90% of (F(a), F(b))
  const double span = fb - fa;
  std::vector<double> v(domain.size(), 0.0);
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (!domain.inside(k)) continue;
    const double unit_g = hi > lo ? (raw[k] - lo) / (hi - lo) : 0.5;
    v[k] = F.inverse(ExtendedReal(fa + span * (0.05 + 0.9 * unit_g)));
  }
  return Field(domain, std::move(v), F.interval());
}

Field exponential_barrier(const Transform& F, const Domain& domain, double a, double b, Point x_star,
                          Point nu) {
  if (!(a < b) || !F.interval().contains_interior(a) || !F.interval().contains_interior(b))
    throw PreconditionError("exponential_barrier needs a < b inside the interior of " +
                            F.interval().to_string());
  const double fa = F.eval(a).value();
  const double fb = F.eval(b).value();
  std::vector<double> v(domain.size(), 0.0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!domain.inside(k)) continue;
    const Point p = domain.point(k);
    const double s = (p.x - x_star.x) * nu.x + (p.y - x_star.y) * nu.y;
    if (s < -1e-12) throw PreconditionError("exponential_barrier: domain leaves the half-space at node " +
                                            std::to_string(k));
    v[k] = F.inverse(ExtendedReal(fb - (fb - fa) * std::exp(-std::max(s, 0.0))));
  }
  return Field(domain, std::move(v), F.interval());
}

}  // namespace fconc
