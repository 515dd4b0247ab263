// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Oracles are closed forms computed here, independently of
// the library code under test.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fconc/concavity.hpp"
#include "fconc/domain.hpp"
#include "fconc/field.hpp"
#include "fconc/generators.hpp"
#include "fconc/harness.hpp"
#include "fconc/heat.hpp"
#include "fconc/probes.hpp"
#include "fconc/screens.hpp"
#include "fconc/transform.hpp"
#include "fconc/transform_spec.hpp"

namespace {

using namespace fconc;
using json = nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool certified(const ProbeResult& r) { return r.outcome == ProbeOutcome::certified; }

// --- 1 ---------------------------------------------------------------------

Outcome alpha_threshold() {
  Outcome o;
  const Domain d = Domain::interval_with_spacing(-3, 3, 0.01);
  const Field g = Field::sample(d, [](Point p) { return std::exp(-p.x * p.x); });
  for (double a : {0.5, 0.6, 1.0})
    o.require(check_f_concave(Transform::log_power(a), g, 1e-9).certified(), "certify alpha=" + fmt(a));
  for (double a : {0.45, 0.4}) {
    const ConcavityReport r = check_f_concave(Transform::log_power(a), g, 1e-9);
    o.require(!r.certified() && !r.witnesses.empty(), "violation alpha=" + fmt(a));
  }
  // L_a(e^{-x^2}) = (1 - |x|^{2a}) / a
  const double a = 0.45;
  const auto L = [a](double x) { return (1 - std::pow(std::abs(x), 2 * a)) / a; };
  const double oracle = L(1.0) - 0.5 * (L(0.5) + L(1.5));
  const double got = slack(Transform::log_power(a), g, Point{0.5}, Point{1.5}, 0.5);
  o.require(std::abs(got - (-0.0263)) <= 1e-3, "slack at (0.5,1.5,1/2) within 1e-3 of -0.0263");
  o.require(std::abs(got - oracle) <= 1e-12, "slack agrees with closed form");
  o.note("slack(0.45)=" + fmt(got) + " oracle=" + fmt(oracle));
  return o;
}

// --- 2 ---------------------------------------------------------------------

/// f = F^{-1}(g) with g = g0 - c (x - x0)^2 strictly concave, so the minimum
/// slack is bounded away from zero and relative errors are meaningful.
Field strictly_concave_field(const Transform& F, const Domain& d, double top, double bottom, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  const double g0 = F(top).to_double();
  const double x0 = -0.5 + u(rng);
  const double reach = std::max(std::abs(d.lo() - x0), std::abs(d.hi() - x0));
  const double c = (g0 - F(bottom).to_double()) / (reach * reach) * (0.3 + 0.7 * u(rng));
  return Field::sample(
      d, [&F, g0, x0, c](Point p) { return F.inverse(ExtendedReal(g0 - c * (p.x - x0) * (p.x - x0))); },
      F.interval());
}

double relative_gap(double got, double want) { return std::abs(got - want) / std::abs(want); }

Outcome slack_scaling() {
  Outcome o;
  const Domain d = Domain::interval(-1, 1, 101);
  std::mt19937_64 rng(20240611);
  double worst = 0;
  for (double p : {-1.0, 0.5, 2.0}) {
    const Transform F = Transform::power(p);
    for (int trial = 0; trial < 10; ++trial) {
      const Field f = strictly_concave_field(F, d, 1.5, 0.3, rng);
      const ConcavityReport base = check_f_concave(F, f, 1e-9);
      o.require(base.certified() && base.min_slack > 0, "sampled field is Phi_" + fmt(p) + "-concave");
      for (double lambda : {0.5, 2.0}) {
        const Field g = f.map([lambda](double v) { return lambda * v; }, F.interval());
        const double got = check_f_concave(F, g, 1e-9).min_slack;
        worst = std::max(worst, relative_gap(got, std::pow(lambda, p) * base.min_slack));
      }
    }
  }
  for (double a : {0.5, 1.0}) {
    const Transform F = Transform::log_power(a);
    for (int trial = 0; trial < 10; ++trial) {
      const Field f = strictly_concave_field(F, d, 0.9, 0.2, rng);
      const ConcavityReport base = check_f_concave(F, f, 1e-9);
      o.require(base.certified() && base.min_slack > 0, "sampled field is L_" + fmt(a) + "-concave");
      for (double r : {0.5, 2.0}) {
        const Field g = f.map([r](double v) { return std::pow(v, r); }, F.interval());
        const double got = check_f_concave(F, g, 1e-9).min_slack;
        worst = std::max(worst, relative_gap(got, std::pow(r, a) * base.min_slack));
      }
    }
  }
  o.require(worst <= 1e-10, "relative scaling error <= 1e-10");
  o.note("worst relative error " + fmt(worst));
  return o;
}

// --- 3 ---------------------------------------------------------------------

Outcome heat_preservation() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const Domain d = Domain::interval(0, 1, 401);
  std::vector<double> chi(d.size(), 0.0);
  // open interval (0.45, 0.55): nodes 181..219
  for (std::size_t i = 181; i < 220; ++i) chi[i] = 1.0;
  const Field initial(d, chi);
  const std::vector<Transform> Fs = {Transform::power_star(0), Transform::log_power(0.5), Transform::log_power(0.75),
                                     Transform::log_power(1.0)};
  for (const Transform& F : Fs) {
    const auto res = preservation_probe(F, initial, {1e-3, 1e-2, 1e-1}, 1e-5, 1e-4, 1e-10);
    double ms = INFINITY;
    for (const PreservationResult& r : res) {
      o.require(certified(r.probe), F.spec() + " at t=" + fmt(r.time));
      if (r.probe.report) ms = std::min(ms, r.probe.report->min_slack);
    }
    o.note(F.spec() + " min_slack " + fmt(ms));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(secs <= 300, "runtime <= 5 min");
  o.note("runtime " + fmt(secs) + " s");
  return o;
}

// --- 4 ---------------------------------------------------------------------

Outcome gaussian_screen_criterion() {
  Outcome o;
  for (const ProbeResult& r : gaussian_screen(Transform::power(0), {0.5, 1, 2}, 3, 0.01))
    o.require(certified(r), "Phi_0 at k=" + fmt(r.parameter));
  for (const ProbeResult& r : gaussian_screen(Transform::log_power(0.5), {0.5, 1}, 3, 0.01))
    o.require(certified(r), "L_0.5 at k=" + fmt(r.parameter));
  const auto refute = gaussian_screen(Transform::power(1), {1}, 3, 0.5);
  o.require(refute.front().outcome == ProbeOutcome::violated, "Phi_1 refuted at k=1");
  // Phi_1(e^{-s^2}) = e^{-s^2} - 1
  const double oracle = std::exp(-0.25) - 2 * std::exp(-1.0) + std::exp(-2.25);
  const Domain d = Domain::interval_with_spacing(0, 3, 0.5);
  const Field g = Field::sample(d, [](Point p) { return std::exp(-p.x * p.x); });
  const double second = -2 * slack(Transform::power(1), g, Point{0.5}, Point{1.5}, 0.5);
  o.require(second > 0, "second difference positive");
  o.require(std::abs(second - 0.148) <= 1e-3, "second difference within 1e-3 of 0.148");
  o.require(std::abs(second - oracle) <= 1e-12, "second difference agrees with closed form");
  o.note("second difference " + fmt(second) + " oracle " + fmt(oracle));
  return o;
}

// --- 5 ---------------------------------------------------------------------

Outcome h_concavity_equivalence() {
  Outcome o;
  for (double p : {0.0, 1.0, 2.0}) {
    const Transform F = Transform::power(p);
    const Lemma42Report r = lemma42_check(F, {0.5, 1, 2, 8}, -5, 5, 0.01, 3, 0.01);
    o.require(r.agree, "Phi_" + fmt(p) + " sides agree");
    o.note("Phi_" + fmt(p) + ": H " + (r.h_concave ? "concave" : "not concave") + ", screen " +
           (r.screen_concave ? "certified" : "not certified"));
    if (!r.screen_concave) continue;
    const double f6 = F(1e-6).to_double();
    const double f12 = F(1e-12).to_double();
    o.note(F.spec() + "(1e-6)=" + fmt(f6) + " " + F.spec() + "(1e-12)=" + fmt(f12));
    o.require(f12 < f6, F.spec() + " decreasing from 1e-6 to 1e-12");
    o.require(f6 < -1e3 && f12 < -1e3, F.spec() + " below -1e3 at tau=1e-6 and 1e-12");
    if (!r.f_samples.empty())
      o.note("sequence 1e-6, 1e-12, ... drops below -1e3 at tau=1e" + fmt(r.tau_exponents.back()) + " (value " +
             fmt(r.f_samples.back()) + ")");
  }
  return o;
}

// --- 6 ---------------------------------------------------------------------

Outcome two_transform_counterexample() {
  Outcome o;
  const CounterexampleResult c =
      thm12_counterexample(Transform::power(0), Transform::power(1), 1, std::exp(1.0), 2);
  o.require(!c.report.certified() && !c.report.witnesses.empty(), "(Phi_0, Phi_1, c=2) violated");
  if (!c.report.witnesses.empty()) {
    const Witness& w = c.report.witnesses.front();
    // the checking transform is an increasing affine image of the raw one, so
    // the sign of the slack carries over
    const Transform raw = c.swapped ? Transform::power(0) : Transform::power(1);
    const double hp = slack_values_extended(raw, c.field[w.x_node], c.field[w.m_node], c.field[w.y_node], w.mu);
    o.require(w.slack < -c.report.tolerance, "reported witness slack negative");
    o.require(hp < 0, "witness slack negative when recomputed in extended precision");
    o.note("witness slack " + fmt(w.slack) + ", raw-transform extended slack " + fmt(hp));
  }
  const Transform aff = parse_transform("affine:A=3,B=-1(power:p=0)");
  for (double cc : {1.5, 2.0, 2.5}) {
    const CounterexampleResult r = thm12_counterexample(Transform::power(0), aff, 1, std::exp(1.0), cc);
    o.require(r.report.certified(), "affine(3,-1)(Phi_0) certified at c=" + fmt(cc));
  }
  return o;
}

// --- 7 ---------------------------------------------------------------------

Outcome closure_probes() {
  Outcome o;
  const Domain d = Domain::interval(-2, 2, 201);
  for (double p : {-1.0, 0.0, 0.5, 2.0}) {
    const Transform F = Transform::power(p);
    std::size_t bad = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const Field f = sample_f_concave(F, d, seed, 4);
      for (const ProbeResult& r : closure_probe(F, f, ClosureKind::scalar, {0.9, 1.1}))
        if (r.outcome == ProbeOutcome::violated) ++bad;
    }
    o.require(bad == 0, "Phi_" + fmt(p) + " closure never violated (" + std::to_string(bad) + " violations)");
  }
  const Domain w = Domain::interval_with_spacing(-2, 2, 0.01);
  const Field f = Field::sample(w, [](Point p) { return std::exp(-(1 + std::abs(p.x)) * (1 + std::abs(p.x))); });
  const double lambda = std::exp(0.5);
  const Transform L = Transform::log_power(0.5);
  const auto probe = closure_probe(L, f, ClosureKind::scalar, {lambda});
  o.require(probe.front().outcome == ProbeOutcome::violated, "L_0.5 probe violated at lambda=e^{1/2}");
  const Field scaled = f.map([lambda](double v) { return lambda * v; }, L.interval());
  const double got = slack(L, scaled, Point{0.5}, Point{1.5}, 0.5);
  // -log(lambda f) = (1 + |x|)^2 - 1/2 and L_{1/2}(tau) = 2 - 2 sqrt(-log tau)
  const auto u = [](double x) { return 2 - 2 * std::sqrt((1 + x) * (1 + x) - 0.5); };
  const double oracle = u(1.0) - 0.5 * (u(0.5) + u(1.5));
  o.require(std::abs(got - (-0.0208)) <= 1e-3, "slack within 1e-3 of -0.0208");
  o.require(std::abs(got - oracle) <= 1e-12, "slack agrees with closed form");
  o.note("slack " + fmt(got) + " oracle " + fmt(oracle));
  return o;
}

// --- 8 ---------------------------------------------------------------------

Outcome eigenpair() {
  Outcome o;
  const EigenPair e1 = first_eigenpair(Domain::interval_with_spacing(0, 1, 1e-3));
  o.require(std::abs(e1.eigenvalue / (kPi * kPi) - 1) <= 0.005, "lambda_1(0,1) within 0.5% of pi^2");
  const EigenPair e2 = first_eigenpair(Domain::unit_square(1.0 / 200));
  o.require(std::abs(e2.eigenvalue / (2 * kPi * kPi) - 1) <= 0.005, "lambda_1(square) within 0.5% of 2 pi^2");
  o.note("lambda_1 " + fmt(e1.eigenvalue) + ", " + fmt(e2.eigenvalue));
  const LongTimeReport lt = long_time_profile({1, 2, 3});
  o.require(lt.monotone, "sup-distance decreasing at t=1,2,3");
  o.note("distances " + fmt(lt.distances.at(0)) + " " + fmt(lt.distances.at(1)) + " " + fmt(lt.distances.at(2)));
  const ExperimentReport c = run_experiment("CONJ5");
  o.require(c.verdict == ExperimentVerdict::report_only, "CONJ5 report_only");
  o.require(c.metrics.count("domains[0]/min_slack") == 1, "CONJ5 reports min slack");
  if (c.metrics.count("domains[0]/min_slack")) o.note("CONJ5 min slack " + fmt(c.metrics.at("domains[0]/min_slack")));
  return o;
}

// --- 9 ---------------------------------------------------------------------

Outcome halflog_limit() {
  Outcome o;
  const ExperimentReport r = halflog_limit_check({std::exp(100.0), std::exp(400.0)}, 0.1, 10, 0.01);
  const double e100 = r.metrics.at("log_k=100/sup_error");
  const double e400 = r.metrics.at("log_k=400/sup_error");
  // Taylor oracle: 2L(1 - sqrt(1 - u/L)) - u = u^2 / (4L) + O(L^-2)
  const double taylor100 = std::pow(std::log(10.0), 2) / 400;
  o.require(e100 <= 0.02, "sup error at k=e^100 <= 0.02");
  o.require(std::abs(e100 / e400 - 4) <= 0.8, "error ratio 4 +- 20%");
  o.require(std::abs(e100 / taylor100 - 1) <= 0.1, "leading-order Taylor term within 10%");
  o.note("errors " + fmt(e100) + ", " + fmt(e400) + " ratio " + fmt(e100 / e400));
  return o;
}

// --- 10 --------------------------------------------------------------------

Outcome asymptotics() {
  Outcome o;
  const double e100 = asymptotic_profile_error(100, 2, 1);
  const double e400 = asymptotic_profile_error(400, 2, 1);
  o.require(e100 <= 0.01, "error at t=100 <= 0.01");
  o.require(e400 < e100, "error at t=400 strictly smaller");
  o.note("errors " + fmt(e100) + ", " + fmt(e400));
  return o;
}

// --- 11 --------------------------------------------------------------------

double sine_error(std::size_t n, double dt) {
  const Domain d = Domain::interval(0, 1, n);
  const Field f0 = Field::sample(d, [](Point p) { return std::sin(kPi * p.x); });
  const double t = 0.1;
  const Field f = fd_evolve(f0, {t}, dt).front().field;
  double err = 0;
  for (std::size_t k = 0; k < d.size(); ++k)
    err = std::max(err, std::abs(f[k] - std::exp(-kPi * kPi * t) * std::sin(kPi * d.x_at(k))));
  return err;
}

std::string stripped(const ExperimentReport& r) {
  json j = r;
  j.erase("runtime_seconds");
  return j.dump(2);
}

Outcome infrastructure() {
  Outcome o;
  const double coarse = sine_error(41, 2e-3);
  const double fine = sine_error(81, 1e-3);
  o.require(coarse / fine >= 3.5, "fd error shrinks >= 3.5x when (h, dt) halve");
  o.note("fd errors " + fmt(coarse) + " -> " + fmt(fine) + " (x" + fmt(coarse / fine) + ")");
  std::size_t mismatches = 0;
  for (const ExperimentInfo& e : list_experiments())
    if (stripped(run_experiment(e.id, json::object(), 99)) != stripped(run_experiment(e.id, json::object(), 99)))
      ++mismatches;
  o.require(mismatches == 0, "repeated seeded runs byte-identical");
  o.note(std::to_string(list_experiments().size()) + " experiments rerun");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 alpha threshold of the Gaussian", alpha_threshold},
      {"2 slack scaling identities", slack_scaling},
      {"3 heat-flow preservation", heat_preservation},
      {"4 Gaussian screen", gaussian_screen_criterion},
      {"5 H-concavity vs screen equivalence", h_concavity_equivalence},
      {"6 two-transform counterexample", two_transform_counterexample},
      {"7 closure probes", closure_probes},
      {"8 eigenpair and long-time profile", eigenpair},
      {"9 normalized half-log limit", halflog_limit},
      {"10 asymptotic profile", asymptotics},
      {"11 fd convergence and determinism", infrastructure},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
