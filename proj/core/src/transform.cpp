#include "fconc/transform.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <type_traits>
#include <utility>

#include <boost/math/special_functions/expm1.hpp>
#include <boost/math/special_functions/log1p.hpp>

#include "fconc/errors.hpp"

namespace fconc {

namespace detail {

struct PowerSpec {
  double p;
  bool star;
};
struct LogPowerSpec {
  double alpha;
};
struct HalfLogSpec {
  double k;
  bool normalized;
};
struct CustomSpec {
  std::function<ExtendedReal(double)> eval;
  std::function<double(double)> derivative;
};
struct CombinedSpec {
  Combinator op;
  Transform base;
};

}  // namespace detail

struct TransformNode {
  std::string name;
  Interval interval;
  ExtendedReal lo_limit;  // limit of F at lo from the inside
  double hi_limit;        // limit of F at hi from the inside, may be +inf
  bool has_derivative;
  std::variant<detail::PowerSpec, detail::LogPowerSpec, detail::HalfLogSpec, detail::CustomSpec,
               detail::CombinedSpec>
      spec;
};

Transform make_transform(TransformNode node) {
  return Transform(std::make_shared<const TransformNode>(std::move(node)));
}

namespace {

using detail::CombinedSpec;
using detail::CustomSpec;
using detail::HalfLogSpec;
using detail::LogPowerSpec;
using detail::PowerSpec;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double xlog1p(double x) { return std::log1p(x); }
HighPrecision xlog1p(const HighPrecision& x) { return boost::math::log1p(x); }
double xexpm1(double x) { return std::expm1(x); }
HighPrecision xexpm1(const HighPrecision& x) { return boost::math::expm1(x); }

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class T>
bool in_interval(const Interval& iv, const T& t) {
  if (!std::isinf(iv.lo())) {
    if (t < T(iv.lo())) return false;
    if (t == T(iv.lo()) && !iv.lo_closed()) return false;
  }
  if (!std::isinf(iv.hi())) {
    if (t > T(iv.hi())) return false;
    if (t == T(iv.hi()) && !iv.hi_closed()) return false;
  }
  return true;
}

// Pull an argument that a combinator computed from an in-range input back
// into the base interval; rounding can push it just outside.
double clamp_into(const Interval& iv, double t) {
  if (t < iv.lo()) t = iv.lo();
  if (t > iv.hi()) t = iv.hi();
  if (t == iv.lo() && !iv.lo_closed()) t = std::nextafter(t, kInf);
  if (t == iv.hi() && !iv.hi_closed()) t = std::nextafter(t, -kInf);
  return t;
}

HighPrecision clamp_into(const Interval& iv, const HighPrecision& t) {
  if (!std::isinf(iv.lo()) && t <= HighPrecision(iv.lo())) {
    return iv.lo_closed() ? HighPrecision(iv.lo()) : HighPrecision(std::nextafter(iv.lo(), kInf));
  }
  if (!std::isinf(iv.hi()) && t >= HighPrecision(iv.hi())) {
    return iv.hi_closed() ? HighPrecision(iv.hi()) : HighPrecision(std::nextafter(iv.hi(), -kInf));
  }
  return t;
}

[[noreturn]] void throw_outside(const TransformNode& n, double tau) {
  std::ostringstream os;
  os.precision(17);
  os << n.name << ": argument " << tau << " outside " << n.interval.to_string();
  throw DomainError(os.str());
}

template <class T>
BasicExtended<T> eval_node(const TransformNode& n, const T& tau);

template <class T>
BasicExtended<T> eval_power(const PowerSpec& s, const T& tau) {
  using std::log;
  if (tau == 0) {
    if (s.p > 0 && !s.star) return BasicExtended<T>(T(-1) / T(s.p));
    return BasicExtended<T>::minus_infinity();
  }
  if (s.p == 0) return BasicExtended<T>(log(tau));
  return BasicExtended<T>(xexpm1(T(s.p) * log(tau)) / T(s.p));
}

template <class T>
T minus_log(const T& tau) {
  using std::log;
  // tau - 1 is exact for tau in [1/2, 1].
  if (tau > T(0.5)) return -xlog1p(tau - T(1));
  return -log(tau);
}

template <class T>
BasicExtended<T> eval_log_power(const LogPowerSpec& s, const T& tau) {
  using std::log;
  const double a = s.alpha;
  if (tau == 0) {
    if (a >= 0) return BasicExtended<T>::minus_infinity();
    return BasicExtended<T>(T(1) / T(a));
  }
  if (tau == 1) return BasicExtended<T>(T(1) / T(a));  // only reachable for a > 0
  const T sl = minus_log(tau);
  if (a == 0) return BasicExtended<T>(-log(sl));
  return BasicExtended<T>(-xexpm1(T(a) * log(sl)) / T(a));
}

template <class T>
BasicExtended<T> eval_half_log(const HalfLogSpec& s, const T& tau) {
  using std::log;
  using std::sqrt;
  if (tau == 0) return BasicExtended<T>::minus_infinity();
  const T k(s.k);
  const T log_k = log(k);
  const T u = sqrt(minus_log(tau / k));
  if (!s.normalized) return BasicExtended<T>(T(-2) * (u - T(1)));
  const T root = sqrt(log_k);
  // -2 sqrt(L) (u - sqrt(L)) with u^2 - L = -log tau, written without cancellation.
  return BasicExtended<T>(T(2) * root * log(tau) / (u + root));
}

template <class T>
BasicExtended<T> eval_custom(const CustomSpec& s, const T& tau) {
  const ExtendedReal y = s.eval(static_cast<double>(tau));
  if (y.is_minus_infinity()) return BasicExtended<T>::minus_infinity();
  return BasicExtended<T>(T(y.value()));
}

template <class T>
BasicExtended<T> eval_combined(const CombinedSpec& s, const T& tau) {
  using std::exp;
  using std::log;
  const Transform& base = s.base;
  const Interval& biv = base.interval();
  return std::visit(
      overloaded{
          [&](const combinators::Affine& a) {
            const auto y = base.eval(tau);
            if (y.is_minus_infinity()) return y;
            return BasicExtended<T>(T(a.a) * y.value() + T(a.b));
          },
          [&](const combinators::Reflect&) {
            const auto y = base.eval(clamp_into(biv, T(-tau)));
            return BasicExtended<T>(-y.value());
          },
          [&](const combinators::Rescale& r) {
            return base.eval(clamp_into(biv, T(T(r.lambda) * tau)));
          },
          [&](const combinators::Restrict&) { return base.eval(tau); },
          [&](const combinators::ConjExp&) {
            return base.eval(clamp_into(biv, T(exp(tau))));
          },
          [&](const combinators::ConjLog&) {
            return base.eval(clamp_into(biv, T(log(tau))));
          },
      },
      s.op);
}

template <class T>
BasicExtended<T> eval_node(const TransformNode& n, const T& tau) {
  if (!in_interval(n.interval, tau)) throw_outside(n, static_cast<double>(tau));
  return std::visit(
      overloaded{
          [&](const PowerSpec& s) { return eval_power(s, tau); },
          [&](const LogPowerSpec& s) { return eval_log_power(s, tau); },
          [&](const HalfLogSpec& s) { return eval_half_log(s, tau); },
          [&](const CustomSpec& s) { return eval_custom(s, tau); },
          [&](const CombinedSpec& s) { return eval_combined(s, tau); },
      },
      n.spec);
}

[[noreturn]] void throw_value_outside(const TransformNode& n, double y) {
  std::ostringstream os;
  os.precision(17);
  os << n.name << ": value " << y << " outside the range of the transform on "
     << n.interval.to_string();
  throw DomainError(os.str());
}

double bisect_inverse(const TransformNode& n, double y) {
  const Interval& iv = n.interval;
  auto value_at = [&](double t) { return eval_node(n, t); };
  double a = iv.lo();
  double b = iv.hi();
  if (std::isinf(a)) {
    a = std::isinf(b) ? -1.0 : b - 1.0;
    for (int i = 0; i < 2000 && !(value_at(a) < ExtendedReal(y)); ++i) a = a * 2.0 - 1.0;
  } else if (!iv.lo_closed()) {
    a = std::nextafter(a, kInf);
  }
  if (std::isinf(b)) {
    b = std::max(a, 0.0) + 1.0;
    for (int i = 0; i < 2000 && value_at(b) < ExtendedReal(y); ++i) b = b * 2.0 + 1.0;
  } else if (!iv.hi_closed()) {
    b = std::nextafter(b, -kInf);
  }
  if (ExtendedReal(y) < value_at(a) || value_at(b) < ExtendedReal(y)) throw_value_outside(n, y);
  for (int i = 0; i < 4000; ++i) {
    const double mid = a + 0.5 * (b - a);
    if (mid <= a || mid >= b) break;
    const ExtendedReal v = value_at(mid);
    if (v.is_finite() && std::abs(v.value() - y) <= 1e-13) return mid;
    if (v < ExtendedReal(y)) a = mid; else b = mid;
  }
  return a + 0.5 * (b - a);
}

double inverse_node(const TransformNode& n, double y) {
  const Interval& iv = n.interval;
  const double t = std::visit(
      overloaded{
          [&](const PowerSpec& s) -> double {
            if (s.p == 0) return std::exp(y);
            const double w = s.p * y;
            if (w < -1.0 || (w == -1.0 && s.p < 0)) throw_value_outside(n, y);
            if (w == -1.0) return 0.0;
            return std::exp(std::log1p(w) / s.p);
          },
          [&](const LogPowerSpec& s) -> double {
            if (s.alpha == 0) return std::exp(-std::exp(-y));
            const double w = -s.alpha * y;
            if (w < -1.0 || (w == -1.0 && s.alpha < 0)) throw_value_outside(n, y);
            if (w == -1.0) return 1.0;
            return std::exp(-std::exp(std::log1p(w) / s.alpha));
          },
          [&](const HalfLogSpec& s) -> double {
            if (!s.normalized) {
              const double u = 1.0 - 0.5 * y;
              if (u < 0) throw_value_outside(n, y);
              return s.k * std::exp(-u * u);
            }
            const double log_k = std::log(s.k);
            if (y > 2.0 * log_k) throw_value_outside(n, y);
            return std::exp(y - y * y / (4.0 * log_k));
          },
          [&](const CustomSpec&) -> double { return bisect_inverse(n, y); },
          [&](const CombinedSpec& s) -> double {
            const Transform& base = s.base;
            return std::visit(
                overloaded{
                    [&](const combinators::Affine& a) { return base.inverse((y - a.b) / a.a); },
                    [&](const combinators::Reflect&) { return -base.inverse(-y); },
                    [&](const combinators::Rescale& r) { return base.inverse(y) / r.lambda; },
                    [&](const combinators::Restrict&) { return base.inverse(y); },
                    [&](const combinators::ConjExp&) { return std::log(base.inverse(y)); },
                    [&](const combinators::ConjLog&) { return std::exp(base.inverse(y)); },
                },
                s.op);
          },
      },
      n.spec);
  if (std::isnan(t)) throw_value_outside(n, y);
  // Rounding may land a hair outside; anything farther is a range error.
  const double slack = 1e-9 * std::max(1.0, std::abs(t));
  if (t < iv.lo() - slack || t > iv.hi() + slack) throw_value_outside(n, y);
  return clamp_into(iv, t);
}

std::optional<double> derivative_node(const TransformNode& n, double tau) {
  if (!n.has_derivative) return std::nullopt;
  if (!n.interval.contains_interior(tau)) {
    std::ostringstream os;
    os.precision(17);
    os << n.name << ": derivative requested at " << tau << ", outside the interior of "
       << n.interval.to_string();
    throw DomainError(os.str());
  }
  return std::visit(
      overloaded{
          [&](const PowerSpec& s) -> std::optional<double> {
            return std::exp((s.p - 1.0) * std::log(tau));
          },
          [&](const LogPowerSpec& s) -> std::optional<double> {
            const double sl = minus_log(tau);
            if (s.alpha == 0) return 1.0 / (tau * sl);
            return std::exp((s.alpha - 1.0) * std::log(sl)) / tau;
          },
          [&](const HalfLogSpec& s) -> std::optional<double> {
            const double u = std::sqrt(minus_log(tau / s.k));
            const double scale = s.normalized ? std::sqrt(std::log(s.k)) : 1.0;
            return scale / (u * tau);
          },
          [&](const CustomSpec& s) -> std::optional<double> { return s.derivative(tau); },
          [&](const CombinedSpec& s) -> std::optional<double> {
            const Transform& base = s.base;
            const Interval& biv = base.interval();
            return std::visit(
                overloaded{
                    [&](const combinators::Affine& a) -> std::optional<double> {
                      return a.a * *base.derivative(tau);
                    },
                    [&](const combinators::Reflect&) -> std::optional<double> {
                      return *base.derivative(-tau);
                    },
                    [&](const combinators::Rescale& r) -> std::optional<double> {
                      return r.lambda * *base.derivative(clamp_into(biv, r.lambda * tau));
                    },
                    [&](const combinators::Restrict&) -> std::optional<double> {
                      return *base.derivative(tau);
                    },
                    [&](const combinators::ConjExp&) -> std::optional<double> {
                      const double e = std::exp(tau);
                      return e * *base.derivative(clamp_into(biv, e));
                    },
                    [&](const combinators::ConjLog&) -> std::optional<double> {
                      return *base.derivative(clamp_into(biv, std::log(tau))) / tau;
                    },
                },
                s.op);
          },
      },
      n.spec);
}

std::string spec_node(const TransformNode& n) {
  return std::visit(
      overloaded{
          [&](const PowerSpec& s) {
            return std::string(s.star ? "powerstar" : "power") + ":p=" + format_number(s.p);
          },
          [&](const LogPowerSpec& s) { return "logpower:alpha=" + format_number(s.alpha); },
          [&](const HalfLogSpec& s) {
            return "halflogk:k=" + format_number(s.k) +
                   ",normalized=" + (s.normalized ? "true" : "false");
          },
          [&](const CustomSpec&) { return "custom:" + n.name; },
          [&](const CombinedSpec& s) {
            const std::string inner = "(" + s.base.spec() + ")";
            return std::visit(
                overloaded{
                    [&](const combinators::Affine& a) {
                      return "affine:A=" + format_number(a.a) + ",B=" + format_number(a.b) + inner;
                    },
                    [&](const combinators::Reflect&) { return "reflect" + inner; },
                    [&](const combinators::Rescale& r) {
                      return "rescale:lambda=" + format_number(r.lambda) + inner;
                    },
                    [&](const combinators::Restrict& r) {
                      return "restrict:lo=" + format_number(r.j.lo()) +
                             ",hi=" + format_number(r.j.hi()) +
                             ",lo_closed=" + (r.j.lo_closed() ? "true" : "false") +
                             ",hi_closed=" + (r.j.hi_closed() ? "true" : "false") + inner;
                    },
                    [&](const combinators::ConjExp&) { return "conjexp" + inner; },
                    [&](const combinators::ConjLog&) { return "conjlog" + inner; },
                },
                s.op);
          },
      },
      n.spec);
}

}  // namespace

// Transform ----------------------------------------------------------------

Transform Transform::power(double p) {
  if (!std::isfinite(p)) throw PreconditionError("power: p must be finite");
  return make_transform(TransformNode{
      "power", Interval::half_line(0.0),
      p > 0 ? ExtendedReal(-1.0 / p) : ExtendedReal::minus_infinity(),
      p < 0 ? -1.0 / p : kInf, true, PowerSpec{p, false}});
}

Transform Transform::power_star(double p) {
  if (!std::isfinite(p)) throw PreconditionError("powerstar: p must be finite");
  return make_transform(TransformNode{
      "powerstar", Interval::half_line(0.0),
      p > 0 ? ExtendedReal(-1.0 / p) : ExtendedReal::minus_infinity(),
      p < 0 ? -1.0 / p : kInf, true, PowerSpec{p, true}});
}

Transform Transform::log_power(double alpha) {
  if (!std::isfinite(alpha)) throw PreconditionError("logpower: alpha must be finite");
  const Interval iv(0.0, 1.0, true, alpha > 0);
  return make_transform(TransformNode{
      "logpower", iv,
      alpha < 0 ? ExtendedReal(1.0 / alpha) : ExtendedReal::minus_infinity(),
      alpha > 0 ? 1.0 / alpha : kInf, true, LogPowerSpec{alpha}});
}

Transform Transform::scaled_half_log(double k, bool normalized) {
  if (!(k > 0) || !std::isfinite(k)) throw PreconditionError("halflogk: k must be a positive finite number");
  if (normalized && !(k > 1)) {
    throw PreconditionError("halflogk: normalization needs k > 1 (log k must be positive)");
  }
  const double top = normalized ? 2.0 * std::log(k) : 2.0;
  return make_transform(TransformNode{"halflogk", Interval::closed(0.0, k),
                                      ExtendedReal::minus_infinity(), top, true,
                                      HalfLogSpec{k, normalized}});
}

Transform Transform::custom(std::string name, Interval interval,
                            std::function<ExtendedReal(double)> eval,
                            std::function<double(double)> derivative) {
  if (!eval) throw PreconditionError("custom transform needs an evaluator");
  ExtendedReal lo_limit = ExtendedReal::minus_infinity();
  double hi_limit = kInf;
  if (!std::isinf(interval.lo())) {
    const double t = interval.lo_closed() ? interval.lo() : std::nextafter(interval.lo(), kInf);
    lo_limit = eval(t);
  }
  if (!std::isinf(interval.hi())) {
    const double t = interval.hi_closed() ? interval.hi() : std::nextafter(interval.hi(), -kInf);
    hi_limit = eval(t).to_double();
  }
  const bool has_d = static_cast<bool>(derivative);
  return make_transform(TransformNode{std::move(name), interval, lo_limit, hi_limit, has_d,
                                      CustomSpec{std::move(eval), std::move(derivative)}});
}

const std::string& Transform::name() const { return node_->name; }
std::string Transform::spec() const { return spec_node(*node_); }
const Interval& Transform::interval() const { return node_->interval; }

bool Transform::admits_minus_infinity_at_lo() const {
  const Interval& iv = node_->interval;
  return iv.lo_closed() && eval(iv.lo()).is_minus_infinity();
}

ExtendedReal Transform::eval(double tau) const { return eval_node(*node_, tau); }

BasicExtended<HighPrecision> Transform::eval(const HighPrecision& tau) const {
  return eval_node(*node_, tau);
}

double Transform::inverse(const ExtendedReal& y) const {
  const Interval& iv = node_->interval;
  if (y.is_minus_infinity()) {
    if (admits_minus_infinity_at_lo()) return iv.lo();
    throw DomainError(node_->name + ": -inf is not a value of the transform on " + iv.to_string());
  }
  if (iv.lo_closed() && eval(iv.lo()) == y) return iv.lo();
  if (iv.hi_closed() && eval(iv.hi()) == y) return iv.hi();
  return inverse_node(*node_, y.value());
}

bool Transform::has_derivative() const { return node_->has_derivative; }

std::optional<double> Transform::derivative(double tau) const { return derivative_node(*node_, tau); }

ExtendedReal Transform::infimum() const {
  const Interval& iv = node_->interval;
  if (iv.lo_closed()) return eval(iv.lo());
  return node_->lo_limit;
}

double Transform::supremum() const {
  const Interval& iv = node_->interval;
  if (iv.hi_closed()) return eval(iv.hi()).value();
  return node_->hi_limit;
}

std::optional<Transform> Transform::base() const {
  if (const auto* c = std::get_if<CombinedSpec>(&node_->spec)) return c->base;
  return std::nullopt;
}

// combine ------------------------------------------------------------------

Transform combine(const Transform& base, const Combinator& op) {
  const Interval& iv = base.interval();
  const TransformNode& bn = *base.node_;
  auto reject = [&](const std::string& why) -> void {
    throw PreconditionError(why + " (base interval " + iv.to_string() + ")");
  };
  TransformNode node = std::visit(
      overloaded{
          [&](const combinators::Affine& a) {
            if (!(a.a > 0) || !std::isfinite(a.a) || !std::isfinite(a.b)) {
              reject("affine: needs finite A > 0 and finite B");
            }
            const ExtendedReal lo = bn.lo_limit.is_minus_infinity()
                                        ? ExtendedReal::minus_infinity()
                                        : ExtendedReal(a.a * bn.lo_limit.value() + a.b);
            return TransformNode{"affine", iv, lo, a.a * bn.hi_limit + a.b, bn.has_derivative,
                                 CombinedSpec{op, base}};
          },
          [&](const combinators::Reflect&) {
            // -F(-t) would be +inf where F is -inf, so that endpoint is dropped.
            const bool hi_closed = iv.lo_closed() && !base.admits_minus_infinity_at_lo();
            const Interval niv(-iv.hi(), -iv.lo(), iv.hi_closed(), hi_closed);
            const ExtendedReal lo = std::isinf(bn.hi_limit) ? ExtendedReal::minus_infinity()
                                                            : ExtendedReal(-bn.hi_limit);
            const double hi = bn.lo_limit.is_minus_infinity() ? kInf : -bn.lo_limit.value();
            return TransformNode{"reflect", niv, lo, hi, bn.has_derivative, CombinedSpec{op, base}};
          },
          [&](const combinators::Rescale& r) {
            if (!(r.lambda > 0) || !std::isfinite(r.lambda)) reject("rescale: needs finite lambda > 0");
            const Interval niv(iv.lo() / r.lambda, iv.hi() / r.lambda, iv.lo_closed(), iv.hi_closed());
            return TransformNode{"rescale", niv, bn.lo_limit, bn.hi_limit, bn.has_derivative,
                                 CombinedSpec{op, base}};
          },
          [&](const combinators::Restrict& r) {
            if (!iv.contains(r.j)) reject("restrict: " + r.j.to_string() + " is not inside the base interval");
            ExtendedReal lo = bn.lo_limit;
            if (r.j.lo() != iv.lo()) lo = base.eval(r.j.lo());
            double hi = bn.hi_limit;
            if (r.j.hi() != iv.hi()) hi = base.eval(r.j.hi()).value();
            return TransformNode{"restrict", r.j, lo, hi, bn.has_derivative, CombinedSpec{op, base}};
          },
          [&](const combinators::ConjExp&) {
            if (iv.lo() < 0) reject("conjexp: needs a base interval inside [0, inf)");
            const bool zero_lo = iv.lo() == 0;
            const Interval niv(zero_lo ? -kInf : std::log(iv.lo()), std::log(iv.hi()),
                               !zero_lo && iv.lo_closed(), iv.hi_closed());
            return TransformNode{"conjexp", niv, bn.lo_limit, bn.hi_limit, bn.has_derivative,
                                 CombinedSpec{op, base}};
          },
          [&](const combinators::ConjLog&) {
            const Interval niv(std::exp(iv.lo()), std::exp(iv.hi()), iv.lo_closed(), iv.hi_closed());
            return TransformNode{"conjlog", niv, bn.lo_limit, bn.hi_limit, bn.has_derivative,
                                 CombinedSpec{op, base}};
          },
      },
      op);
  return make_transform(std::move(node));
}

// means ----------------------------------------------------------------------

double f_mean(const Transform& f, double a, double b, double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw PreconditionError("f_mean: mu must lie in [0, 1]");
  const Interval& iv = f.interval();
  if (!iv.contains(a) || !iv.contains(b)) {
    throw DomainError("f_mean: arguments must lie in " + iv.to_string());
  }
  if (mu == 0.0) return a;
  if (mu == 1.0) return b;
  const ExtendedReal fa = f.eval(a);
  const ExtendedReal fb = f.eval(b);
  if (fa.is_minus_infinity() || fb.is_minus_infinity()) return iv.lo();
  const double m = f.inverse(ExtendedReal((1.0 - mu) * fa.value() + mu * fb.value()));
  return std::clamp(m, std::min(a, b), std::max(a, b));
}

double power_mean(double p, double a, double b, double mu) {
  if (!(a > 0) || !(b > 0)) throw PreconditionError("power_mean: a and b must be positive");
  if (!(mu >= 0.0 && mu <= 1.0)) throw PreconditionError("power_mean: mu must lie in [0, 1]");
  if (mu == 0.0) return a;
  if (mu == 1.0) return b;
  const double la = std::log(a);
  const double lb = std::log(b);
  if (p == 0.0) return std::exp((1.0 - mu) * la + mu * lb);
  // log-sum-exp of log(1-mu) + p log a and log(mu) + p log b
  const double ea = std::log1p(-mu) + p * la;
  const double eb = std::log(mu) + p * lb;
  const double top = std::max(ea, eb);
  const double lse = top + std::log1p(std::exp(std::min(ea, eb) - top));
  return std::exp(lse / p);
}

// audit ----------------------------------------------------------------------

std::vector<double> interior_samples(const Interval& iv, std::size_t n) {
  std::vector<double> out;
  out.reserve(n);
  const double lo = iv.lo();
  const double hi = iv.hi();
  for (std::size_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(i + 1) / static_cast<double>(n + 1);
    double t;
    if (!std::isinf(lo) && !std::isinf(hi)) {
      t = lo + (hi - lo) * u;
    } else if (!std::isinf(lo)) {
      t = lo + u / (1.0 - u);
    } else if (!std::isinf(hi)) {
      t = hi - (1.0 - u) / u;
    } else {
      t = (u - 0.5) / (u * (1.0 - u));
    }
    out.push_back(t);
  }
  return out;
}

AuditReport admissibility_audit(const Transform& f, std::size_t n_samples) {
  if (n_samples < 2) throw PreconditionError("admissibility_audit: needs at least 2 samples");
  AuditReport rep;
  rep.n_samples = n_samples;
  const auto taus = interior_samples(f.interval(), n_samples);
  std::vector<ExtendedReal> vals;
  vals.reserve(taus.size());
  for (double t : taus) vals.push_back(f.eval(t));
  for (std::size_t i = 0; i + 1 < taus.size(); ++i) {
    if (!(vals[i] < vals[i + 1])) {
      rep.monotonicity_failures.push_back(
          {taus[i], taus[i + 1], vals[i].to_double(), vals[i + 1].to_double()});
    }
  }
  for (std::size_t i = 0; i < taus.size(); ++i) {
    double back;
    try {
      back = f.inverse(vals[i]);
    } catch (const DomainError&) {
      back = std::numeric_limits<double>::quiet_NaN();
    }
    const double err = std::abs(back - taus[i]) / std::max(1.0, std::abs(taus[i]));
    if (!(err <= 1e-12)) {
      rep.roundtrip_failures.push_back({taus[i], back, err});
    }
    if (std::isnan(err)) rep.max_roundtrip_error = kInf;
    else rep.max_roundtrip_error = std::max(rep.max_roundtrip_error, err);
  }
  rep.pass = rep.monotonicity_failures.empty() && rep.roundtrip_failures.empty();
  return rep;
}

}  // namespace fconc
