#include "fconc/heat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <nlohmann/json.hpp>

#include "fconc/concavity.hpp"
#include "fconc/detail/tridiagonal.hpp"
#include "fconc/errors.hpp"

namespace fconc {

namespace {

using boost::math::quadrature::gauss_kronrod;
constexpr double kPi = std::numbers::pi;

// 1/2 [erf((x + r) / s) - erf((x - r) / s)], s = 2 sqrt(t), without the
// cancellation erf suffers in the tails.
double ball_1d(double x, double r, double s) {
  x = std::abs(x);
  return 0.5 * (std::erfc((x - r) / s) - std::erfc((x + r) / s));
}

template <class Fn>
double integrate(Fn&& f, double a, double b, double abs_tol, double& err) {
  double e = 0.0;
  const double v = gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-12, &e);
  err = e;
  if (!(e <= abs_tol) || !std::isfinite(v))
    throw NumericalError("kernel_convolve: quadrature error estimate " + std::to_string(e) + " above " +
                             std::to_string(abs_tol),
                         e);
  return v;
}

double convolve_one(const InitialDatum& initial, double t, Point x, int dimension, double abs_tol) {
  const double s = 2.0 * std::sqrt(t);
  const double norm = 1.0 / std::sqrt(4.0 * kPi * t);
  double err = 0.0;
  if (const auto* ball = std::get_if<BallIndicator>(&initial)) {
    const double r = ball->radius;
    if (dimension == 1) return ball_1d(x.x, r, s);
    // integrate the 1D kernel in y1 = r sin(theta) against the x2-section
    // of the disk; the substitution removes the square-root endpoints
    auto section = [&](double theta) {
      const double y1 = r * std::sin(theta);
      const double w = r * std::cos(theta);
      const double d = x.x - y1;
      return norm * std::exp(-d * d / (4.0 * t)) * ball_1d(x.y, w, s) * w;
    };
    return integrate(section, -0.5 * kPi, 0.5 * kPi, abs_tol, err);
  }
  const ClosedForm& phi = std::get<ClosedForm>(initial);
  const double half = 9.0 * s;
  if (dimension == 1) {
    auto integrand = [&](double y) {
      const double d = x.x - y;
      return norm * std::exp(-d * d / (4.0 * t)) * phi(Point{y, 0.0});
    };
    return integrate(integrand, x.x - half, x.x + half, abs_tol, err);
  }
  double worst_inner = 0.0;
  auto outer = [&](double y1) {
    const double d1 = x.x - y1;
    auto inner = [&](double y2) {
      const double d2 = x.y - y2;
      return norm * std::exp(-d2 * d2 / (4.0 * t)) * phi(Point{y1, y2});
    };
    double e = 0.0;
    const double v = integrate(inner, x.y - half, x.y + half, abs_tol, e);
    worst_inner = std::max(worst_inner, e);
    return norm * std::exp(-d1 * d1 / (4.0 * t)) * v;
  };
  return integrate(outer, x.x - half, x.x + half, abs_tol, err);
}

// The negative Dirichlet Laplacian restricted to interior nodes, with
// cached factorizations of alpha I + beta L.
class DirichletOperator {
 public:
  explicit DirichletOperator(const Domain& d) : d_(d), index_(d.size(), kNone) {
    for (std::size_t k = 0; k < d.size(); ++k)
      if (d.interior(k)) {
        index_[k] = nodes_.size();
        nodes_.push_back(k);
      }
    if (nodes_.empty()) throw PreconditionError("domain has no interior nodes");
    h_ = d.hx();
    if (d.dimension() == 2) build_2d();
  }

  std::size_t unknowns() const { return nodes_.size(); }
  double h() const { return h_; }

  std::vector<double> gather(const std::vector<double>& values) const {
    std::vector<double> u(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) u[i] = values[nodes_[i]];
    return u;
  }

  std::vector<double> scatter(const std::vector<double>& u) const {
    std::vector<double> v(d_.size(), 0.0);
    for (std::size_t i = 0; i < nodes_.size(); ++i) v[nodes_[i]] = u[i];
    return v;
  }

  void apply(const std::vector<double>& u, std::vector<double>& out) const {
    if (d_.dimension() == 1) {
      detail::apply_laplacian_1d(u, h_, out);
      return;
    }
    Eigen::Map<const Eigen::VectorXd> uv(u.data(), static_cast<Eigen::Index>(u.size()));
    out.resize(u.size());
    Eigen::Map<Eigen::VectorXd> ov(out.data(), static_cast<Eigen::Index>(out.size()));
    ov = lap_ * uv;
  }

  /// x <- (alpha I + beta L)^{-1} x
  void solve(double alpha, double beta, std::vector<double>& x) {
    Factor& f = factor(alpha, beta);
    if (f.tri) {
      f.tri->solve(x);
      return;
    }
    Eigen::Map<Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::VectorXd sol = f.ldlt->solve(xv);
    if (f.ldlt->info() != Eigen::Success) throw NumericalError("sparse solve failed", 0.0);
    xv = sol;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  struct Factor {
    double alpha;
    double beta;
    std::unique_ptr<detail::ShiftedLaplacian1D<double>> tri;
    std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> ldlt;
  };

  void build_2d() {
    const double inv_h2 = 1.0 / (h_ * h_);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(nodes_.size() * 5);
    const std::size_t nx = d_.nx();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const std::size_t k = nodes_[i];
      const auto row = static_cast<Eigen::Index>(i);
      trip.emplace_back(row, row, 4.0 * inv_h2);
      // the bounding-box grid need not reach the top/right edge of the
      // polygon, so a strict interior node can sit on the last row or
      // column; off-grid neighbors count as boundary (value 0)
      const std::size_t ix = k % nx;
      const std::size_t iy = k / nx;
      auto couple = [&](std::size_t nb) {
        if (index_[nb] != kNone) trip.emplace_back(row, static_cast<Eigen::Index>(index_[nb]), -inv_h2);
      };
      if (ix > 0) couple(k - 1);
      if (ix + 1 < nx) couple(k + 1);
      if (iy > 0) couple(k - nx);
      if (iy + 1 < d_.ny()) couple(k + nx);
    }
    const auto n = static_cast<Eigen::Index>(nodes_.size());
    lap_.resize(n, n);
    lap_.setFromTriplets(trip.begin(), trip.end());
  }

  Factor& factor(double alpha, double beta) {
    for (Factor& f : cache_)
      if (f.alpha == alpha && f.beta == beta) return f;
    Factor f{alpha, beta, nullptr, nullptr};
    if (d_.dimension() == 1) {
      f.tri = std::make_unique<detail::ShiftedLaplacian1D<double>>(nodes_.size(), h_, alpha, beta);
    } else {
      Eigen::SparseMatrix<double> m = beta * lap_;
      for (Eigen::Index i = 0; i < m.rows(); ++i) m.coeffRef(i, i) += alpha;
      f.ldlt = std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>(m);
      if (f.ldlt->info() != Eigen::Success) throw NumericalError("sparse factorization failed", 0.0);
    }
    cache_.push_back(std::move(f));
    return cache_.back();
  }

  const Domain& d_;
  std::vector<std::size_t> index_;
  std::vector<std::size_t> nodes_;
  double h_ = 0.0;
  Eigen::SparseMatrix<double> lap_;
  std::vector<Factor> cache_;
};

double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::vector<double> kernel_convolve(const InitialDatum& initial, double t, const std::vector<Point>& points,
                                    int dimension, double abs_tol) {
  if (!(t > 0)) throw PreconditionError("kernel_convolve needs t > 0");
  if (dimension != 1 && dimension != 2) throw PreconditionError("kernel_convolve: dimension must be 1 or 2");
  std::vector<double> out;
  out.reserve(points.size());
  for (const Point& p : points) out.push_back(convolve_one(initial, t, p, dimension, abs_tol));
  return out;
}

double kernel_convolve(const InitialDatum& initial, double t, Point x, int dimension, double abs_tol) {
  return kernel_convolve(initial, t, std::vector<Point>{x}, dimension, abs_tol).front();
}

double asymptotic_profile_error(double t, double L, int dimension, std::size_t n_points) {
  if (!(t > 0) || !(L >= 0)) throw PreconditionError("asymptotic_profile_error needs t > 0 and L >= 0");
  const double ball_volume = dimension == 1 ? 2.0 : kPi;
  const double scale = std::pow(4.0 * kPi * t, 0.5 * dimension) / ball_volume;
  const std::size_t n = L > 0 ? std::max<std::size_t>(n_points, 2) : 1;
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = n == 1 ? 0.0 : L * std::sqrt(t) * static_cast<double>(i) / static_cast<double>(n - 1);
    pts.push_back({r, 0.0});
  }
  const std::vector<double> u = kernel_convolve(BallIndicator{1.0}, t, pts, dimension);
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    err = std::max(err, std::abs(scale * u[i] - std::exp(-pts[i].x * pts[i].x / (4.0 * t))));
  return err;
}

std::vector<HeatState> fd_evolve(const Field& initial, const std::vector<double>& t_targets, double dt,
                                 const EvolveOptions& opts) {
  if (!(dt > 0)) throw PreconditionError("fd_evolve needs dt > 0");
  if (t_targets.empty()) throw PreconditionError("fd_evolve needs at least one target time");
  for (std::size_t i = 0; i < t_targets.size(); ++i) {
    if (!(t_targets[i] > 0) || (i > 0 && !(t_targets[i] > t_targets[i - 1])))
      throw PreconditionError("fd_evolve: target times must be positive and strictly increasing");
  }
  if (t_targets.front() < 10.0 * dt * (1 - 1e-12))
    throw PreconditionError("fd_evolve: first target time must be at least 10 dt");

  const Domain& d = initial.domain();
  DirichletOperator op(d);
  std::vector<double> u = op.gather(initial.values());
  const double upper = initial.sup();
  const bool clip = opts.clip_output && initial.inf() >= 0.0;

  std::vector<HeatState> states;
  std::vector<double> lu;
  // time is full_steps * dt + partial, so long runs do not accumulate drift
  std::size_t full_steps = 0;
  double partial = 0.0;
  std::size_t steps = 0;
  for (double target : t_targets) {
    while (true) {
      const double remaining = target - (static_cast<double>(full_steps) * dt + partial);
      if (remaining <= 1e-9 * dt) break;
      const bool full = remaining >= dt * (1 - 1e-9);
      const double step = full ? dt : remaining;
      if (opts.rannacher_startup && steps < 2) {
        op.solve(1.0, 0.5 * step, u);
        op.solve(1.0, 0.5 * step, u);
      } else {
        op.apply(u, lu);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] -= 0.5 * step * lu[i];
        op.solve(1.0, 0.5 * step, u);
      }
      if (full) ++full_steps;
      else partial += step;
      ++steps;
    }
    std::vector<double> vals = op.scatter(u);
    HeatDiagnostics diag;
    diag.raw_min = *std::min_element(u.begin(), u.end());
    diag.raw_max = *std::max_element(u.begin(), u.end());
    if (clip)
      for (double& v : vals) v = std::clamp(v, 0.0, upper);
    diag.dt = dt;
    diag.h = op.h();
    diag.steps = steps;
    diag.scheme = opts.rannacher_startup ? "crank-nicolson+rannacher" : "crank-nicolson";
    Field f(d, std::move(vals), clip ? Interval::half_line(0.0) : Interval::open(-kInf, kInf));
    diag.mass = f.mass();
    diag.max_value = f.sup();
    states.push_back(HeatState{std::move(f), target, diag});
  }
  return states;
}

EigenPair first_eigenpair(const Domain& domain, double tolerance, std::size_t max_iterations) {
  DirichletOperator op(domain);
  std::vector<double> u(op.unknowns(), 1.0);
  std::vector<double> lu;
  double lambda = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  std::size_t it = 0;
  while (it < max_iterations) {
    ++it;
    op.solve(0.0, 1.0, u);
    const double m = sup_norm(u);
    for (double& x : u) x /= m;
    op.apply(u, lu);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      num += u[i] * lu[i];
      den += u[i] * u[i];
    }
    lambda = num / den;
    residual = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) residual = std::max(residual, std::abs(lu[i] - lambda * u[i]));
    residual /= sup_norm(u);
    if (residual <= tolerance) break;
  }
  if (!(residual <= tolerance))
    throw NumericalError("first_eigenpair: residual " + std::to_string(residual) + " after " +
                             std::to_string(it) + " iterations",
                         residual);
  for (double x : u)
    if (!(x > 0)) throw NumericalError("first_eigenpair: eigenvector is not positive", residual);

  Field sup_field(domain, op.scatter(u));
  const double cell = domain.dimension() == 1 ? op.h() : op.h() * op.h();
  double l2 = 0.0;
  for (double x : u) l2 += x * x * cell;
  std::vector<double> w = u;
  for (double& x : w) x /= std::sqrt(l2);
  Field l2_field(domain, op.scatter(w));
  return EigenPair{lambda, std::move(sup_field), std::move(l2_field), residual, it};
}

void to_json(nlohmann::json& j, const HeatDiagnostics& d) {
  j = {{"mass", d.mass},     {"max", d.max_value}, {"raw_min", d.raw_min}, {"raw_max", d.raw_max},
       {"dt", d.dt},         {"h", d.h},           {"steps", d.steps},     {"scheme", d.scheme}};
}

void to_json(nlohmann::json& j, const HeatState& s) {
  j = s.diagnostics;
  j["time"] = s.time;
}

}  // namespace fconc
