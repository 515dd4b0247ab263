#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fconc/concavity.hpp"
#include "fconc/field.hpp"
#include "fconc/transform.hpp"

namespace fconc {

enum class ExperimentVerdict { pass, fail, report_only };

std::string to_string(ExperimentVerdict v);

/// One experiment run. Everything except runtime_seconds is a pure
/// function of (experiment_id, config_echo, seed).
struct ExperimentReport {
  std::string experiment_id;
  std::string paper_anchor;
  ExperimentVerdict verdict = ExperimentVerdict::report_only;
  std::map<std::string, double> metrics;
  nlohmann::json witnesses = nlohmann::json::array();
  double runtime_seconds = 0.0;
  /// Merged configuration, including the defaults version it started from.
  nlohmann::json config_echo = nlohmann::json::object();
  std::uint64_t seed = 0;
};

/// Keys are emitted sorted; non-finite metrics become "inf", "-inf", "nan".
void to_json(nlohmann::json& j, const ExperimentReport& r);
/// Pretty-printed JSON with a trailing newline.
std::string report_to_string(const ExperimentReport& r);

struct ExperimentInfo {
  std::string id;
  std::string anchor;
  /// False for conjecture probes, which never assert a verdict.
  bool asserted = true;
};

const std::vector<ExperimentInfo>& list_experiments();

/// Version of the frozen defaults record compiled into the library.
int defaults_version();
/// The full defaults record (version, seed, per-experiment configs).
const nlohmann::json& defaults();
/// Default config of one experiment. Throws PreconditionError on unknown ids.
nlohmann::json default_config(std::string_view id);

/// Overlays `overrides` onto `base`. Every override key must exist in base
/// with a compatible JSON type; violations throw ConfigError naming the
/// field. Objects merge recursively, everything else is replaced.
nlohmann::json merge_config(const nlohmann::json& base, const nlohmann::json& overrides);

/// Runs a registered experiment with the defaults overlaid by `overrides`.
/// The seed defaults to the one in the defaults record.
ExperimentReport run_experiment(std::string_view id, const nlohmann::json& overrides = nlohmann::json::object(),
                                std::optional<std::uint64_t> seed = std::nullopt);

/// sup over the tau grid of |normalized L_{1/2}^k(tau) - log tau| for each
/// k. Passes when the errors decrease in k and each stays within 1.1 times
/// the leading-order term max (log tau)^2 / (4 log k).
ExperimentReport halflog_limit_check(const std::vector<double>& k_list, double tau_lo, double tau_hi,
                                     double grid);

struct TrivialityBound {
  /// Half-width of the smallest box (same center as f's domain, max norm)
  /// on which F o f would have to drop below inf F; empty when inf F = -inf.
  std::optional<double> radius;
  double chord_slope = 0.0;
  Point from;
  Point to;
};

/// Extrapolates every chord of F o f along grid lines. Concavity along the
/// chord's line forces F o f to keep falling at least at the chord's slope,
/// so it hits inf F within a finite distance; the smallest such radius is
/// returned. f must pass check_f_concave with `opts` and be nonconstant.
TrivialityBound triviality_radius(const Transform& F, const Field& f_on_box, const CheckOptions& opts = {});

}  // namespace fconc
