#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fconc/concavity.hpp"
#include "fconc/heat.hpp"
#include "fconc/probes.hpp"
#include "fconc/transform.hpp"

namespace fconc {

/// Concavity of s -> F(k exp(-s^2)) on [0, s_max] (spacing ds), per k.
/// ProbeResult::parameter holds k. A violation for any admissible k rules
/// out preservation of F-concavity by the heat flow.
std::vector<ProbeResult> gaussian_screen(const Transform& F, const std::vector<double>& k_list, double s_max,
                                         double ds, double tolerance = 1e-9);

struct Lemma42Report {
  /// Concavity of H(t) = F(e^t) over the t grid.
  ConcavityReport h_report;
  std::vector<ProbeResult> screen;
  bool h_concave = false;
  /// Every k in the list certified (range exits count as not certified).
  bool screen_concave = false;
  bool agree = false;
  /// F sampled at tau = 1e-6, 1e-12, 1e-18, ... (50-digit arithmetic)
  /// until it drops below -1e3 or 1000 samples are spent.
  std::vector<double> tau_exponents;
  std::vector<double> f_samples;
  bool decreasing = false;
  bool reaches_minus_1e3 = false;
};

/// Both sides of the equivalence: concavity of t -> F(e^t) on [t_lo, t_hi]
/// and the Gaussian screen over k_list.
Lemma42Report lemma42_check(const Transform& F, const std::vector<double>& k_list, double t_lo, double t_hi,
                            double dt_grid, double s_max = 3.0, double ds = 0.01, double tolerance = 1e-9);

struct PreservationResult {
  double time = 0.0;
  ProbeResult probe;
  HeatDiagnostics diagnostics;
};

/// Checks F-concavity of each heat state on nodes with u >= value_floor.
std::vector<PreservationResult> preservation_check(const Transform& F, const std::vector<HeatState>& states,
                                                   double tolerance = 1e-4, double value_floor = 1e-10);
/// fd_evolve followed by preservation_check.
std::vector<PreservationResult> preservation_probe(const Transform& F, const Field& initial,
                                                   const std::vector<double>& t_targets, double dt,
                                                   double tolerance = 1e-4, double value_floor = 1e-10);

struct LongTimeReport {
  std::vector<double> times;
  /// sup |u(t) / rho(t) - c phi| / sup |c phi|, rho the product of the first
  /// mode's per-step amplification factors.
  std::vector<double> distances;
  double eigenvalue = 0.0;
  /// exp(-(lambda_2 - lambda_1)) for the discrete operator.
  double predicted_ratio = 0.0;
  bool monotone = false;
};

/// Long-time profile on (0, 1) with initial datum x^2 (1 - x), computed in
/// 50-digit arithmetic so the geometric decay at t = 1, 2, 3 is not buried
/// under double roundoff.
LongTimeReport long_time_profile(const std::vector<double>& times, std::size_t n_nodes = 101, double dt = 1e-3);

void to_json(nlohmann::json& j, const PreservationResult& r);

}  // namespace fconc
