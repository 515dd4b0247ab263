#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fconc/concavity.hpp"
#include "fconc/field.hpp"
#include "fconc/transform.hpp"

namespace fconc {

/// Leaving F's interval is its own outcome, separate from a concavity
/// violation: F-concavity is only defined for functions with values in I.
enum class ProbeOutcome { certified, violated, range_exit };

struct ProbeResult {
  double parameter = 0.0;
  ProbeOutcome outcome = ProbeOutcome::certified;
  std::optional<ConcavityReport> report;
  std::optional<std::size_t> exit_node;
  double exit_value = 0.0;
};

enum class ClosureKind { scalar, power, translate };

/// Runs check_f_concave on lambda f, f^r or f + c for each parameter. The
/// base field must itself pass; otherwise PreconditionError.
std::vector<ProbeResult> closure_probe(const Transform& F, const Field& f, ClosureKind kind,
                                       const std::vector<double>& params, const CheckOptions& opts = {});

/// Checks one transformed field against F, with range-exit detection.
ProbeResult probe_field(const Transform& F, const Field& g, double parameter, const CheckOptions& opts);

struct StrengthReport {
  bool counterexample_found = false;
  std::size_t n_checked = 0;
  std::uint64_t witness_seed = 0;
  std::optional<Field> witness_field;
  std::optional<ConcavityReport> witness_report;
};

/// Samples F1-concave fields and checks each against F2. F1's interval must
/// lie inside F2's.
StrengthReport compare_strength(const Transform& f1, const Transform& f2, const Domain& domain,
                                std::size_t n_samples, std::uint64_t seed, const CheckOptions& opts = {});

struct CounterexampleResult {
  /// Values of the transforms at c after normalizing F_i(a) = 0, F_i(b) = 1.
  double f1_at_c = 0.0;
  double f2_at_c = 0.0;
  /// True when the roles were swapped because F2(c) > F1(c).
  bool swapped = false;
  double a_prime = 0.0;
  Field field;
  ConcavityReport report;
};

/// f = G(min(x, 1)) on (F(a'), 2), G the inverse of the normalized transform
/// with the larger value at c, checked against the other one. The check
/// fails exactly when the normalized transforms differ at c.
CounterexampleResult thm12_counterexample(const Transform& f1, const Transform& f2, double a, double b,
                                          double c, std::size_t n_nodes = 1201,
                                          const CheckOptions& opts = {});

/// The c in (a, b), on an n-point grid, maximizing the normalized gap
/// |F1(c) - F2(c)|, or empty when the gap stays below 1e-12.
std::optional<double> separating_point(const Transform& f1, const Transform& f2, double a, double b,
                                       std::size_t n = 201);

struct CStarReport {
  std::vector<ProbeResult> per_kappa;
  /// Largest tested kappa below which every tested kappa certifies.
  std::optional<double> threshold;
};

/// Tests kappa f against F for each kappa. F must have F(0) = -inf.
CStarReport cstar_membership(const Transform& F, const Field& f, std::vector<double> kappas,
                             const CheckOptions& opts = {});

std::string to_string(ProbeOutcome o);
void to_json(nlohmann::json& j, const ProbeResult& r);

}  // namespace fconc
