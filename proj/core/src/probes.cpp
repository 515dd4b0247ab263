#include "fconc/probes.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "fconc/errors.hpp"
#include "fconc/generators.hpp"

namespace fconc {

namespace {

const Interval kWholeLine = Interval::open(-kInf, kInf);

Transform normalized(const Transform& F, double a, double b, const char* which) {
  const ExtendedReal fa = F.eval(a);
  const ExtendedReal fb = F.eval(b);
  if (!fa.is_finite() || !fb.is_finite() || !(fb.value() > fa.value()))
    throw PreconditionError(std::string("degenerate normalization for ") + which + " = " + F.spec());
  const double span = fb.value() - fa.value();
  return combine(F, combinators::Affine{1.0 / span, -fa.value() / span});
}

double below(const Interval& i, double a) {
  if (std::isfinite(i.lo())) return i.lo() + 0.5 * (a - i.lo());
  return a - std::max(1.0, std::abs(a));
}

}  // namespace

ProbeResult probe_field(const Transform& F, const Field& g, double parameter, const CheckOptions& opts) {
  ProbeResult r;
  r.parameter = parameter;
  if (auto k = first_range_exit(g, F.interval())) {
    r.outcome = ProbeOutcome::range_exit;
    r.exit_node = *k;
    r.exit_value = g[*k];
    return r;
  }
  r.report = check_f_concave(F, g, opts);
  r.outcome = r.report->certified() ? ProbeOutcome::certified : ProbeOutcome::violated;
  return r;
}

std::vector<ProbeResult> closure_probe(const Transform& F, const Field& f, ClosureKind kind,
                                       const std::vector<double>& params, const CheckOptions& opts) {
  if (!check_f_concave(F, f, opts).certified())
    throw PreconditionError("closure_probe: the base field is not F-concave for " + F.spec());
  std::vector<ProbeResult> out;
  out.reserve(params.size());
  for (double p : params) {
    Field g = [&] {
      switch (kind) {
        case ClosureKind::scalar:
          if (!(p > 0)) throw PreconditionError("closure_probe: scalar factors must be positive");
          return f.map([p](double v) { return p * v; }, kWholeLine);
        case ClosureKind::power:
          if (!(p > 0)) throw PreconditionError("closure_probe: exponents must be positive");
          return f.map([p](double v) { return std::pow(v, p); }, kWholeLine);
        case ClosureKind::translate:
          return f.map([p](double v) { return v + p; }, kWholeLine);
      }
      throw PreconditionError("closure_probe: unknown kind");
    }();
    out.push_back(probe_field(F, g, p, opts));
  }
  return out;
}

StrengthReport compare_strength(const Transform& f1, const Transform& f2, const Domain& domain,
                                std::size_t n_samples, std::uint64_t seed, const CheckOptions& opts) {
  if (!f2.interval().contains(f1.interval()))
    throw PreconditionError("compare_strength: interval " + f1.interval().to_string() + " of F1 is not inside " +
                            f2.interval().to_string());
  StrengthReport rep;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const std::uint64_t s = seed + i;
    const Field f = sample_f_concave(f1, domain, s, 1 + i % 4);
    ConcavityReport r = check_f_concave(f2, f, opts);
    ++rep.n_checked;
    if (!r.certified()) {
      rep.counterexample_found = true;
      rep.witness_seed = s;
      rep.witness_field = f;
      rep.witness_report = std::move(r);
      break;
    }
  }
  return rep;
}

CounterexampleResult thm12_counterexample(const Transform& f1, const Transform& f2, double a, double b,
                                          double c, std::size_t n_nodes, const CheckOptions& opts) {
  if (!(a < c && c < b)) throw PreconditionError("thm12_counterexample needs a < c < b");
  for (const Transform* t : {&f1, &f2})
    if (!t->interval().contains_interior(a) || !t->interval().contains_interior(b))
      throw PreconditionError("a and b must lie in the interior of " + t->interval().to_string());
  const Transform n1 = normalized(f1, a, b, "F1");
  const Transform n2 = normalized(f2, a, b, "F2");
  const double u1 = n1.eval(c).value();
  const double u2 = n2.eval(c).value();

  // generate with the transform that is larger at c, check against the other
  const bool swapped = u2 > u1;
  const Transform& gen = swapped ? n2 : n1;
  const Transform& chk = swapped ? n1 : n2;

  const double a_prime = below(gen.interval(), a);
  const ExtendedReal lo = gen.eval(a_prime);
  if (!lo.is_finite()) throw PreconditionError("thm12_counterexample: F(a') is not finite");
  const Domain dom = Domain::interval(lo.value(), 2.0, n_nodes);
  const Field field = Field::sample(
      dom, [gen](Point p) { return gen.inverse(ExtendedReal(std::min(p.x, 1.0))); }, gen.interval());
  ConcavityReport report = check_f_concave(chk, field, opts);
  return CounterexampleResult{u1, u2, swapped, a_prime, field, std::move(report)};
}

std::optional<double> separating_point(const Transform& f1, const Transform& f2, double a, double b,
                                       std::size_t n) {
  const Transform n1 = normalized(f1, a, b, "F1");
  const Transform n2 = normalized(f2, a, b, "F2");
  double best = 0.0;
  std::optional<double> arg;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double c = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    const double gap = std::abs(n1.eval(c).value() - n2.eval(c).value());
    if (gap > best) {
      best = gap;
      arg = c;
    }
  }
  if (best < 1e-12) return std::nullopt;
  return arg;
}

CStarReport cstar_membership(const Transform& F, const Field& f, std::vector<double> kappas,
                             const CheckOptions& opts) {
  const Interval& I = F.interval();
  if (!(I.lo() == 0.0 && I.lo_closed() && F.eval(0.0).is_minus_infinity()))
    throw PreconditionError("cstar_membership needs F(0) = -inf, got " + F.spec());
  for (double k : kappas)
    if (!(k > 0)) throw PreconditionError("cstar_membership: kappa values must be positive");
  std::sort(kappas.begin(), kappas.end(), std::greater<>());
  CStarReport rep;
  for (double k : kappas) rep.per_kappa.push_back(probe_field(F, f.map([k](double v) { return k * v; }, kWholeLine), k, opts));
  for (auto it = rep.per_kappa.rbegin(); it != rep.per_kappa.rend(); ++it) {
    if (it->outcome != ProbeOutcome::certified) break;
    rep.threshold = it->parameter;
  }
  return rep;
}

std::string to_string(ProbeOutcome o) {
  switch (o) {
    case ProbeOutcome::certified: return "certified";
    case ProbeOutcome::violated: return "violated";
    case ProbeOutcome::range_exit: return "range_exit";
  }
  return "unknown";
}

void to_json(nlohmann::json& j, const ProbeResult& r) {
  j = {{"parameter", r.parameter}, {"outcome", to_string(r.outcome)}};
  if (r.report) j["report"] = *r.report;
  if (r.exit_node) {
    j["exit_node"] = *r.exit_node;
    j["exit_value"] = json_number(r.exit_value);
  }
}

}  // namespace fconc
