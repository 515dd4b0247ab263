#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fconc/domain.hpp"
#include "fconc/field.hpp"

namespace fconc {

/// Indicator of the centered ball of the given radius.
struct BallIndicator {
  double radius = 1.0;
};
using InitialDatum = std::variant<BallIndicator, ClosedForm>;

/// Whole-space heat evolution e^{t Delta} applied to the datum, at each point.
/// The 1D ball uses the erf closed form; everything else goes through
/// adaptive Gauss-Kronrod quadrature (NumericalError if the error estimate
/// stays above abs_tol). Generic data are integrated over the Gaussian
/// window |y - x| <= 18 sqrt(t).
std::vector<double> kernel_convolve(const InitialDatum& initial, double t, const std::vector<Point>& points,
                                    int dimension, double abs_tol = 1e-10);
double kernel_convolve(const InitialDatum& initial, double t, Point x, int dimension, double abs_tol = 1e-10);

/// sup over |x| <= L sqrt(t) of |(4 pi t)^{N/2} |B|^{-1} u(x, t) - exp(-|x|^2 / 4t)|
/// for u the evolved unit-ball indicator. u is radial, so the sup is taken
/// along a ray with n_points samples.
double asymptotic_profile_error(double t, double L, int dimension, std::size_t n_points = 201);

struct HeatDiagnostics {
  double mass = 0.0;
  double max_value = 0.0;
  /// Extremes of the solver output before clipping to [0, sup initial].
  double raw_min = 0.0;
  double raw_max = 0.0;
  double dt = 0.0;
  double h = 0.0;
  std::size_t steps = 0;
  std::string scheme;
};

struct HeatState {
  Field field;
  double time = 0.0;
  HeatDiagnostics diagnostics;
};

struct EvolveOptions {
  /// Replace the first two Crank-Nicolson steps by four backward Euler
  /// half-steps, which damps the stiff modes of rough initial data.
  bool rannacher_startup = true;
  /// Clip output to [0, sup initial] when the initial datum is nonnegative.
  bool clip_output = true;
};

/// Crank-Nicolson for u_t = Delta u with zero Dirichlet data at every
/// non-interior node (3-point Laplacian in 1D, 5-point in 2D). Targets must
/// be increasing with the first one at least 10 dt. A last partial step is
/// taken when a target is not a multiple of dt.
std::vector<HeatState> fd_evolve(const Field& initial, const std::vector<double>& t_targets, double dt,
                                 const EvolveOptions& opts = {});

struct EigenPair {
  double eigenvalue = 0.0;
  /// sup-normalized (max = 1)
  Field eigenfunction;
  /// sum phi^2 h^N = 1
  Field l2_normalized;
  double residual = 0.0;
  std::size_t iterations = 0;
};

/// Inverse power iteration for the discrete Dirichlet Laplacian, shift 0,
/// all-ones start. Stops once |Delta_h phi + lambda phi|_inf / |phi|_inf <=
/// tolerance; NumericalError after max_iterations.
EigenPair first_eigenpair(const Domain& domain, double tolerance = 1e-8, std::size_t max_iterations = 1000);

void to_json(nlohmann::json& j, const HeatDiagnostics& d);
void to_json(nlohmann::json& j, const HeatState& s);

}  // namespace fconc
