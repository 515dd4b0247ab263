#include "fconc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "experiments.hpp"
#include "fconc/errors.hpp"
#include "fconc/field_io.hpp"
#include "fconc/high_precision.hpp"

namespace fconc {

namespace detail {
extern const char* const kHarnessDefaultsJson;
}

namespace {

using json = nlohmann::json;

const char* json_kind(const json& j) {
  if (j.is_number()) return "number";
  if (j.is_boolean()) return "boolean";
  if (j.is_string()) return "string";
  if (j.is_array()) return "array";
  if (j.is_object()) return "object";
  return "null";
}

bool same_kind(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) {
    // integer-valued defaults (seeds, node counts) reject fractional input
    if (a.is_number_integer() && b.is_number_float()) return b.get<double>() == std::floor(b.get<double>());
    return true;
  }
  return std::string(json_kind(a)) == json_kind(b);
}

void check_array(const json& base, const json& value, const std::string& path) {
  if (base.empty()) return;
  const json& proto = base.front();
  for (std::size_t i = 0; i < value.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!same_kind(proto, value[i]))
      throw ConfigError(p, std::string("expected ") + json_kind(proto) + ", got " + json_kind(value[i]));
    if (proto.is_array()) check_array(proto, value[i], p);
  }
}

json merge_at(const json& base, const json& overrides, const std::string& prefix) {
  if (!overrides.is_object()) throw ConfigError(prefix.empty() ? "config" : prefix, "expected an object");
  json out = base;
  for (auto it = overrides.begin(); it != overrides.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!base.contains(it.key())) throw ConfigError(path, "unknown field");
    const json& b = base.at(it.key());
    const json& v = it.value();
    if (!same_kind(b, v)) throw ConfigError(path, std::string("expected ") + json_kind(b) + ", got " + json_kind(v));
    if (b.is_array()) check_array(b, v, path);
    // domain records are replaced wholesale: "h" in place of "n" is only
    // meaningful as a complete record
    if (b.is_object() && !b.contains("kind"))
      out[it.key()] = merge_at(b, v, path);
    else
      out[it.key()] = v;
  }
  return out;
}

const std::vector<ExperimentInfo> kRegistry = {
    {"T1.1a", "T1.1a: on a convex domain other than the whole space, every admissible F admits a nonconstant "
              "F-concave function (exponential barrier construction)"},
    {"T1.1b", "T1.1b: F-concavity on the whole space is trivial exactly when inf F is finite"},
    {"T1.2", "T1.2: two transforms define the same concavity class exactly when one is an affine image of the "
             "other"},
    {"T1.3", "T1.3: among nontrivial F-concavities, closure under scalar multiples near 1 singles out power "
             "concavity"},
    {"T1.4", "T1.4: closure under exponents near 1 singles out power log-concavity"},
    {"T3.1", "T3.1: closure under small translations singles out F = A Phi_alpha(e^t) + B"},
    {"T1.5", "T1.5: an F-concavity with F(0) = -inf preserved by the Dirichlet heat flow is weaker than "
             "log-concavity"},
    {"L4.1", "L4.1: heat-flow preservation forces s -> F(k exp(-s^2)) to be concave for every k > 0"},
    {"L4.2", "L4.2: concavity of t -> F(e^t) is equivalent to the Gaussian screen over all k > 0"},
    {"L4.3", "L4.3: a concave Gaussian screen at k = a makes every L_1/2-concave field, scaled by a, F-concave"},
    {"P4.2", "P4.2: alpha-log-concavity with 1/2 <= alpha <= 1 is preserved by the Dirichlet heat flow"},
    {"S42-limit", "S42-limit: the normalized L_1/2^k transforms converge to log as k -> infinity"},
    {"R1.2", "R1.2: a quasiconcave step function that is not F-concave for any admissible F"},
    {"CONJ5", "CONJ5: conjectured 1/2-log-concavity of the sup-normalized first Dirichlet eigenfunction", false},
};

}  // namespace

std::string to_string(ExperimentVerdict v) {
  switch (v) {
    case ExperimentVerdict::pass:
      return "pass";
    case ExperimentVerdict::fail:
      return "fail";
    case ExperimentVerdict::report_only:
      return "report_only";
  }
  return "report_only";
}

void to_json(json& j, const ExperimentReport& r) {
  json metrics = json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = json_number(v);
  j = json{{"experiment_id", r.experiment_id}, {"paper_anchor", r.paper_anchor},
           {"verdict", to_string(r.verdict)},   {"metrics", std::move(metrics)},
           {"witnesses", r.witnesses},          {"runtime_seconds", r.runtime_seconds},
           {"config_echo", r.config_echo},      {"seed", r.seed}};
}

std::string report_to_string(const ExperimentReport& r) { return json(r).dump(2) + "\n"; }

const std::vector<ExperimentInfo>& list_experiments() { return kRegistry; }

const json& defaults() {
  static const json d = json::parse(detail::kHarnessDefaultsJson);
  return d;
}

int defaults_version() { return defaults().at("version").get<int>(); }

json default_config(std::string_view id) {
  const json& ex = defaults().at("experiments");
  const auto it = ex.find(std::string(id));
  if (it == ex.end()) throw PreconditionError("unknown experiment id \"" + std::string(id) + "\"");
  return *it;
}

json merge_config(const json& base, const json& overrides) {
  if (overrides.is_null()) return base;
  return merge_at(base, overrides, "");
}

ExperimentReport run_experiment(std::string_view id, const json& overrides, std::optional<std::uint64_t> seed) {
  const auto info = std::find_if(kRegistry.begin(), kRegistry.end(), [&](const auto& e) { return e.id == id; });
  if (info == kRegistry.end()) throw PreconditionError("unknown experiment id \"" + std::string(id) + "\"");
  const json cfg = merge_config(default_config(id), overrides);

  ExperimentReport rep;
  rep.experiment_id = info->id;
  rep.paper_anchor = info->anchor;
  rep.seed = seed.value_or(defaults().at("seed").get<std::uint64_t>());
  rep.config_echo = cfg;
  rep.config_echo["defaults_version"] = defaults_version();

  const auto start = std::chrono::steady_clock::now();
  detail::find_experiment(id)(cfg, rep.seed, rep);
  rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!info->asserted) rep.verdict = ExperimentVerdict::report_only;
  return rep;
}

ExperimentReport halflog_limit_check(const std::vector<double>& k_list, double tau_lo, double tau_hi, double grid) {
  ExperimentReport rep;
  rep.experiment_id = "S42-limit";
  rep.paper_anchor = kRegistry[11].anchor;
  if (k_list.empty()) throw PreconditionError("halflog_limit_check: empty k list");
  for (std::size_t i = 0; i < k_list.size(); ++i) {
    if (!(k_list[i] > 1) || !std::isfinite(k_list[i]))
      throw PreconditionError("halflog_limit_check: k values must be finite and > 1");
    if (i > 0 && !(k_list[i] > k_list[i - 1])) throw PreconditionError("halflog_limit_check: k list must increase");
  }
  if (!(tau_lo > 0) || !(tau_hi > tau_lo) || !(tau_hi < k_list.front()))
    throw PreconditionError("halflog_limit_check: tau range must lie inside (0, min k)");
  if (!(grid > 0)) throw PreconditionError("halflog_limit_check: grid spacing must be positive");

  const auto n = static_cast<std::size_t>(std::llround((tau_hi - tau_lo) / grid)) + 1;
  std::vector<double> taus(std::max<std::size_t>(n, 2));
  for (std::size_t i = 0; i < taus.size(); ++i)
    taus[i] = i + 1 == taus.size() ? tau_hi : tau_lo + static_cast<double>(i) * grid;
  const double log_span = std::max(std::abs(std::log(tau_lo)), std::abs(std::log(tau_hi)));

  bool pass = true;
  double prev = kInf;
  for (double k : k_list) {
    const Transform F = Transform::scaled_half_log(k, true);
    const double log_k = std::log(k);
    double err = 0.0;
    double err_hp = 0.0;
    double arg = taus.front();
    for (double tau : taus) {
      const double e = std::abs(F(tau).value() - std::log(tau));
      const HighPrecision t(tau);
      const double e_hp = static_cast<double>(abs(F.eval(t).value() - log(t)));
      if (e_hp > err_hp) {
        err_hp = e_hp;
        arg = tau;
      }
      err = std::max(err, e);
    }
    const double bound = log_span * log_span / (4 * log_k);
    const std::string key = "log_k=" + format_double(log_k) + "/";
    rep.metrics[key + "sup_error"] = err_hp;
    rep.metrics[key + "sup_error_double"] = err;
    rep.metrics[key + "argmax_tau"] = arg;
    rep.metrics[key + "leading_order"] = bound;
    rep.metrics[key + "error_at_tau_1"] = std::abs(F(1.0).value());
    if (std::isfinite(prev)) rep.metrics[key + "ratio_to_previous"] = prev / err_hp;
    if (!(err_hp <= 1.1 * bound) || !(err_hp < prev) || F(1.0).value() != 0.0) pass = false;
    prev = err_hp;
  }
  rep.verdict = pass ? ExperimentVerdict::pass : ExperimentVerdict::fail;
  return rep;
}

TrivialityBound triviality_radius(const Transform& F, const Field& f, const CheckOptions& opts) {
  const Domain& d = f.domain();
  std::vector<double> g(d.size(), 0.0);
  double g_min = kInf;
  double g_max = -kInf;
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (!d.inside(k)) continue;
    const ExtendedReal v = F(f[k]);
    if (v.is_minus_infinity()) throw PreconditionError("triviality_radius: F o f takes the value -inf");
    g[k] = v.value();
    g_min = std::min(g_min, g[k]);
    g_max = std::max(g_max, g[k]);
  }
  if (!(g_max > g_min)) throw PreconditionError("triviality_radius: field is constant, there is no chord");
  if (!check_f_concave(F, f, opts).certified())
    throw PreconditionError("triviality_radius: field is not F-concave on its box");

  TrivialityBound out;
  const ExtendedReal inf_f = F.infimum();
  if (inf_f.is_minus_infinity()) return out;
  const double floor_value = inf_f.value();

  Point center{(d.lo() + d.hi()) / 2, 0.0};
  if (d.dimension() == 2) {
    const Point a = d.point(0);
    const Point b = d.point(d.size() - 1);
    center = {(a.x + b.x) / 2, (a.y + b.y) / 2};
  }

  double best = kInf;
  auto consider = [&](std::size_t p, std::size_t q) {
    if (g[p] == g[q]) return;
    if (g[p] < g[q]) std::swap(p, q);
    const Point hi = d.point(p);
    const Point lo = d.point(q);
    const double len = std::hypot(lo.x - hi.x, lo.y - hi.y);
    const double slope = (g[p] - g[q]) / len;
    const double dist = (g[q] - floor_value) / slope;
    const Point z{lo.x + (lo.x - hi.x) / len * dist, lo.y + (lo.y - hi.y) / len * dist};
    const double r = std::max(std::abs(z.x - center.x), std::abs(z.y - center.y));
    if (r < best || (r == best && slope > out.chord_slope)) {
      best = r;
      out.chord_slope = slope;
      out.from = hi;
      out.to = lo;
    }
  };
  // chords along grid rows and columns; the domain is convex, so every
  // node between two inside nodes of a line is inside as well
  const std::size_t nx = d.nx();
  const std::size_t ny = d.dimension() == 2 ? d.ny() : 1;
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t a = 0; a < nx; ++a)
      for (std::size_t b = a + 1; b < nx; ++b)
        if (d.inside(j * nx + a) && d.inside(j * nx + b)) consider(j * nx + a, j * nx + b);
  if (d.dimension() == 2)
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t a = 0; a < ny; ++a)
        for (std::size_t b = a + 1; b < ny; ++b)
          if (d.inside(a * nx + i) && d.inside(b * nx + i)) consider(a * nx + i, b * nx + i);
  if (std::isfinite(best)) out.radius = best;
  return out;
}

}  // namespace fconc
