#include "fconc/screens.hpp"

#include <cmath>

#include <boost/math/constants/constants.hpp>
#include <nlohmann/json.hpp>

#include "fconc/detail/tridiagonal.hpp"
#include "fconc/errors.hpp"

namespace fconc {

std::vector<ProbeResult> gaussian_screen(const Transform& F, const std::vector<double>& k_list, double s_max,
                                         double ds, double tolerance) {
  const Domain d = Domain::interval_with_spacing(0.0, s_max, ds);
  CheckOptions opts;
  opts.tolerance = tolerance;
  std::vector<ProbeResult> out;
  for (double k : k_list) {
    if (!(k > 0)) throw PreconditionError("gaussian_screen: k values must be positive");
    const Field g = Field::sample(d, [k](Point p) { return k * std::exp(-p.x * p.x); });
    out.push_back(probe_field(F, g, k, opts));
  }
  return out;
}

Lemma42Report lemma42_check(const Transform& F, const std::vector<double>& k_list, double t_lo, double t_hi,
                            double dt_grid, double s_max, double ds, double tolerance) {
  Lemma42Report rep;
  const Domain d = Domain::interval_with_spacing(t_lo, t_hi, dt_grid);
  const Field e = Field::sample(d, [](Point p) { return std::exp(p.x); });
  if (auto k = first_range_exit(e, F.interval()))
    throw PreconditionError("lemma42_check: e^t leaves " + F.interval().to_string() + " at t=" +
                            std::to_string(d.x_at(*k)));
  CheckOptions opts;
  opts.tolerance = tolerance;
  rep.h_report = check_f_concave(F, e, opts);
  rep.h_concave = rep.h_report.certified();
  rep.screen = gaussian_screen(F, k_list, s_max, ds, tolerance);
  rep.screen_concave = true;
  for (const ProbeResult& r : rep.screen)
    if (r.outcome != ProbeOutcome::certified) rep.screen_concave = false;
  rep.agree = rep.h_concave == rep.screen_concave;

  if (F.interval().lo() == 0.0) {
    rep.decreasing = true;
    for (int j = 1; j <= 1000; ++j) {
      const HighPrecision tau = boost::multiprecision::pow(HighPrecision(10), -6 * j);
      const auto v = F.eval(tau);
      const double fv = v.is_minus_infinity() ? -kInf : static_cast<double>(v.value());
      if (!rep.f_samples.empty() && !(fv < rep.f_samples.back())) {
        rep.decreasing = false;
        break;
      }
      rep.tau_exponents.push_back(-6.0 * j);
      rep.f_samples.push_back(fv);
      if (fv < -1e3) {
        rep.reaches_minus_1e3 = true;
        break;
      }
    }
  }
  return rep;
}

std::vector<PreservationResult> preservation_check(const Transform& F, const std::vector<HeatState>& states,
                                                   double tolerance, double value_floor) {
  CheckOptions opts;
  opts.tolerance = tolerance;
  opts.value_floor = value_floor;
  std::vector<PreservationResult> out;
  for (const HeatState& s : states) out.push_back({s.time, probe_field(F, s.field, s.time, opts), s.diagnostics});
  return out;
}

std::vector<PreservationResult> preservation_probe(const Transform& F, const Field& initial,
                                                   const std::vector<double>& t_targets, double dt,
                                                   double tolerance, double value_floor) {
  return preservation_check(F, fd_evolve(initial, t_targets, dt), tolerance, value_floor);
}

LongTimeReport long_time_profile(const std::vector<double>& times, std::size_t n_nodes, double dt) {
  using T = HighPrecision;
  if (n_nodes < 5) throw PreconditionError("long_time_profile needs at least 5 nodes");
  for (std::size_t i = 0; i < times.size(); ++i)
    if (!(times[i] > 0) || (i > 0 && !(times[i] > times[i - 1])))
      throw PreconditionError("long_time_profile: times must be positive and increasing");

  const std::size_t n = n_nodes - 2;
  const T h = T(1) / T(n_nodes - 1);
  const T pi = boost::math::constants::pi<T>();
  const T tau = T(dt);

  // the 3-point Dirichlet Laplacian has exact eigenpairs
  // lambda_m = 4/h^2 sin^2(m pi h / 2), phi_m(x_i) = sin(m pi x_i)
  auto lambda = [&](int m) {
    const T s = sin(T(m) * pi * h / 2);
    return 4 * s * s / (h * h);
  };
  const T l1 = lambda(1);
  const T l2 = lambda(2);
  std::vector<T> phi(n), u(n);
  for (std::size_t i = 0; i < n; ++i) {
    const T x = T(i + 1) * h;
    phi[i] = sin(pi * x);
    u[i] = x * x * (1 - x);
  }
  T num = 0, den = 0;
  for (std::size_t i = 0; i < n; ++i) {
    num += u[i] * phi[i];
    den += phi[i] * phi[i];
  }
  const T c = num / den;
  T cphi_sup = 0;
  for (const T& p : phi) cphi_sup = std::max(cphi_sup, T(abs(c * p)));

  const T rho1 = (1 - tau * l1 / 2) / (1 + tau * l1 / 2);
  const T rho2 = (1 - tau * l2 / 2) / (1 + tau * l2 / 2);
  const detail::ShiftedLaplacian1D<T> solver(n, h, T(1), tau / 2);

  LongTimeReport rep;
  rep.times = times;
  rep.eigenvalue = static_cast<double>(l1);
  rep.predicted_ratio = static_cast<double>(pow(rho2 / rho1, T(std::llround(1.0 / dt))));

  std::vector<T> lu;
  std::size_t step = 0;
  T amplification = 1;
  for (double t : times) {
    const auto target = static_cast<std::size_t>(std::llround(t / dt));
    for (; step < target; ++step) {
      detail::apply_laplacian_1d(u, h, lu);
      for (std::size_t i = 0; i < n; ++i) u[i] -= tau / 2 * lu[i];
      solver.solve(u);
      amplification *= rho1;
    }
    T dist = 0;
    for (std::size_t i = 0; i < n; ++i) dist = std::max(dist, T(abs(u[i] / amplification - c * phi[i])));
    rep.distances.push_back(static_cast<double>(dist / cphi_sup));
  }
  rep.monotone = true;
  for (std::size_t i = 1; i < rep.distances.size(); ++i)
    if (!(rep.distances[i] < rep.distances[i - 1])) rep.monotone = false;
  return rep;
}

void to_json(nlohmann::json& j, const PreservationResult& r) {
  j = {{"time", r.time}, {"probe", r.probe}, {"diagnostics", r.diagnostics}};
}

}  // namespace fconc
