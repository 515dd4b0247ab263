#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fconc/extended_real.hpp"
#include "fconc/high_precision.hpp"
#include "fconc/interval.hpp"

namespace fconc {

struct TransformNode;

namespace combinators {

/// t -> A F(t) + B, A > 0.
struct Affine {
  double a;
  double b;
};
/// t -> -F(-t) on -I.
struct Reflect {};
/// t -> F(lambda t) on I / lambda.
struct Rescale {
  double lambda;
};
/// F restricted to J, J a subset of I.
struct Restrict {
  Interval j;
};
/// t -> F(e^t) on log(I); needs I inside [0, inf).
struct ConjExp {};
/// t -> F(log t) on exp(I).
struct ConjLog {};

}  // namespace combinators

using Combinator = std::variant<combinators::Affine, combinators::Reflect, combinators::Rescale,
                                combinators::Restrict, combinators::ConjExp, combinators::ConjLog>;

/// An admissible function F: I -> R u {-inf}, strictly increasing on I and
/// continuous on the interior.
///
/// Transforms are immutable values; copies share their evaluation tree.
/// Every transform can be evaluated in double and in 50-digit precision, so
/// a concavity witness found in double can be re-checked along the exact
/// same formula.
class Transform {
 public:
  /// Phi_p on [0, inf): (t^p - 1)/p, log t for p = 0, with Phi_p(0) the
  /// limit from the right (-1/p for p > 0, -inf otherwise).
  static Transform power(double p);
  /// Phi_p^*: Phi_p with the value at 0 replaced by -inf when p > 0.
  static Transform power_star(double p);
  /// L_alpha(t) = -Phi_alpha(-log t) on [0, 1] (alpha > 0) or [0, 1).
  static Transform log_power(double alpha);
  /// L_{1/2}(t / k) on [0, k]. The normalized variant is shifted and scaled
  /// so that it vanishes at 1 with unit slope there; it needs k > 1.
  static Transform scaled_half_log(double k, bool normalized);

  /// A user-supplied map. It gets no closed-form inverse: inversion is by
  /// bisection. Intended for tests and experiments with ad hoc transforms.
  static Transform custom(std::string name, Interval interval,
                          std::function<ExtendedReal(double)> eval,
                          std::function<double(double)> derivative = {});

  /// Kind name: "power", "logpower", "affine", ...
  const std::string& name() const;
  /// Canonical spec string, parseable by parse_transform().
  std::string spec() const;

  const Interval& interval() const;
  /// True when F(lo) = -inf at a closed lower endpoint.
  bool admits_minus_infinity_at_lo() const;

  ExtendedReal operator()(double tau) const { return eval(tau); }
  ExtendedReal eval(double tau) const;
  BasicExtended<HighPrecision> eval(const HighPrecision& tau) const;

  /// F^{-1}(y) for y in F(I). -inf maps back to the lower endpoint.
  double inverse(const ExtendedReal& y) const;

  bool has_derivative() const;
  /// F'(tau) on Int I; empty when the transform carries no derivative.
  std::optional<double> derivative(double tau) const;

  /// inf over I of F (F(lo) at a closed end, otherwise the limit).
  ExtendedReal infimum() const;
  /// sup over I of F; +inf allowed.
  double supremum() const;

  /// The transform this one was built from, if it came out of combine().
  std::optional<Transform> base() const;

 private:
  explicit Transform(std::shared_ptr<const TransformNode> node) : node_(std::move(node)) {}

  friend Transform make_transform(TransformNode node);
  friend Transform combine(const Transform& base, const Combinator& op);

  std::shared_ptr<const TransformNode> node_;
};

/// Build a new transform from `base`. Domain violations throw
/// PreconditionError naming the offending interval.
Transform combine(const Transform& base, const Combinator& op);

/// F^{-1}((1 - mu) F(a) + mu F(b)), the quasi-arithmetic mean induced by F.
/// When one of F(a), F(b) is -inf and 0 < mu < 1, the mean is the lower
/// endpoint of the interval.
double f_mean(const Transform& f, double a, double b, double mu);

/// [(1 - mu) a^p + mu b^p]^{1/p}; geometric mean at p = 0. Evaluated in the
/// log domain so large |p| does not overflow.
double power_mean(double p, double a, double b, double mu);

/// n points spread over the interior of I (unbounded ends are reached
/// through a rational map, so samples stay at moderate magnitude).
std::vector<double> interior_samples(const Interval& interval, std::size_t n);

struct MonotonicityFailure {
  double tau_lo;
  double tau_hi;
  double value_lo;
  double value_hi;
};

struct RoundtripFailure {
  double tau;
  double recovered;
  double error;
};

struct AuditReport {
  bool pass = true;
  std::size_t n_samples = 0;
  std::vector<MonotonicityFailure> monotonicity_failures;
  std::vector<RoundtripFailure> roundtrip_failures;
  double max_roundtrip_error = 0.0;
};

/// Sample Int I and report monotonicity and inverse round-trip failures.
/// Round-trip error is |F^{-1}(F(t)) - t| / max(1, |t|) against 1e-12.
AuditReport admissibility_audit(const Transform& f, std::size_t n_samples);

}  // namespace fconc
