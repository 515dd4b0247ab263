#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fconc/transform.hpp"
#include "fconc/transform_spec.hpp"

namespace fconc {
namespace {

const double kE = std::exp(1.0);

double v(const Transform& f, double t) { return f.eval(t).value(); }

TEST(Power, KnownValues) {
  EXPECT_DOUBLE_EQ(v(Transform::power(0), 1.0), 0.0);
  EXPECT_DOUBLE_EQ(v(Transform::power(2), 3.0), 4.0);
  EXPECT_DOUBLE_EQ(v(Transform::power(1), 0.0), -1.0);
  EXPECT_TRUE(Transform::power(-1).eval(0.0).is_minus_infinity());
  EXPECT_TRUE(Transform::power(0).eval(0.0).is_minus_infinity());
}

TEST(Power, RejectsOutsideInterval) {
  EXPECT_THROW(Transform::power(1).eval(-0.5), DomainError);
}

TEST(PowerStar, KnownValues) {
  EXPECT_TRUE(Transform::power_star(2).eval(0.0).is_minus_infinity());
  EXPECT_DOUBLE_EQ(v(Transform::power_star(2), 3.0), 4.0);
  EXPECT_DOUBLE_EQ(v(Transform::power_star(-1), 2.0), 0.5);
  EXPECT_TRUE(Transform::power_star(2).admits_minus_infinity_at_lo());
  EXPECT_FALSE(Transform::power(2).admits_minus_infinity_at_lo());
}

TEST(LogPower, KnownValues) {
  EXPECT_NEAR(v(Transform::log_power(0.5), std::exp(-4.0)), -2.0, 1e-14);
  EXPECT_NEAR(v(Transform::log_power(1.0), std::exp(-1.0)), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(v(Transform::log_power(-1.0), 0.0), -1.0);
}

TEST(LogPower, Endpoints) {
  EXPECT_TRUE(Transform::log_power(0.0).eval(0.0).is_minus_infinity());
  EXPECT_TRUE(Transform::log_power(0.3).eval(0.0).is_minus_infinity());
  EXPECT_DOUBLE_EQ(v(Transform::log_power(0.5), 1.0), 2.0);
  EXPECT_TRUE(Transform::log_power(0.5).interval().hi_closed());
  EXPECT_FALSE(Transform::log_power(0.0).interval().hi_closed());
  EXPECT_FALSE(Transform::log_power(-2.0).interval().hi_closed());
  EXPECT_THROW(Transform::log_power(-1.0).eval(1.0), DomainError);
}

TEST(LogPower, GaussianProfileIdentity) {
  // L_alpha(f_alpha(x)) = -|x| with f_alpha = exp(-(1 + alpha|x|)^{1/alpha}).
  for (double alpha : {-0.5, 0.0, 0.5, 1.0, 2.0}) {
    const Transform f = Transform::log_power(alpha);
    for (double x : {0.0, 0.1, 0.5, 1.0, 1.7}) {
      if (alpha < 0 && x >= 1.0 / std::abs(alpha)) continue;
      const double fa = alpha == 0 ? std::exp(-std::exp(x))
                                   : std::exp(-std::pow(1.0 + alpha * x, 1.0 / alpha));
      EXPECT_NEAR(v(f, fa), -x, 1e-12) << "alpha=" << alpha << " x=" << x;
    }
  }
}

TEST(ScaledHalfLog, KnownValues) {
  const Transform n = Transform::scaled_half_log(kE, true);
  EXPECT_NEAR(v(n, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(*n.derivative(1.0), 1.0, 1e-14);
  EXPECT_NEAR(v(Transform::scaled_half_log(1.0, false), std::exp(-4.0)), -2.0, 1e-14);
  EXPECT_THROW(Transform::scaled_half_log(1.0, true), PreconditionError);
  EXPECT_THROW(Transform::scaled_half_log(0.5, true), PreconditionError);
}

TEST(ScaledHalfLog, MatchesDefinitionThroughCombinators) {
  // (log k)^{1/2} (L_{1/2}(t/k) - L_{1/2}(1/k))
  const double k = 7.5;
  const Transform direct = Transform::scaled_half_log(k, true);
  const Transform half = Transform::log_power(0.5);
  for (double t : {0.01, 0.3, 1.0, 2.0, 7.0}) {
    const double expected = std::sqrt(std::log(k)) * (v(half, t / k) - v(half, 1.0 / k));
    EXPECT_NEAR(v(direct, t), expected, 1e-13);
  }
}

TEST(Combine, KnownValues) {
  const Transform affine = combine(Transform::power(0), combinators::Affine{1.0, 1.0});
  EXPECT_NEAR(v(affine, 1.0 / kE), 0.0, 1e-15);
  EXPECT_NEAR(v(affine, 1.0 / kE), v(Transform::log_power(1.0), 1.0 / kE), 1e-15);

  const Transform refl = combine(Transform::power(1), combinators::Reflect{});
  EXPECT_DOUBLE_EQ(v(refl, -2.0), -1.0);
  EXPECT_EQ(refl.interval().hi(), 0.0);

  const Transform cexp = combine(Transform::power(0), combinators::ConjExp{});
  for (double t : {-3.0, 0.0, 0.7, 5.0}) EXPECT_NEAR(v(cexp, t), t, 1e-15);
}

TEST(Combine, IntervalsAndErrors) {
  const Transform phi0 = Transform::power(0);
  // reflect drops the endpoint where F = -inf
  const Transform refl = combine(phi0, combinators::Reflect{});
  EXPECT_FALSE(refl.interval().hi_closed());
  const Transform resc = combine(Transform::log_power(0.5), combinators::Rescale{0.25});
  EXPECT_DOUBLE_EQ(resc.interval().hi(), 4.0);
  EXPECT_NEAR(v(resc, 4.0), 2.0, 1e-15);

  EXPECT_THROW(combine(phi0, combinators::Affine{0.0, 1.0}), PreconditionError);
  EXPECT_THROW(combine(phi0, combinators::Rescale{-1.0}), PreconditionError);
  EXPECT_THROW(combine(Transform::log_power(0.5), combinators::Restrict{Interval::closed(0.5, 2.0)}),
               PreconditionError);
  EXPECT_THROW(combine(refl, combinators::ConjExp{}), PreconditionError);
  try {
    combine(Transform::log_power(0.5), combinators::Restrict{Interval::closed(0.5, 2.0)});
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("[0.5, 2]"), std::string::npos) << e.what();
  }
}

TEST(Combine, DerivativesFollowChainRule) {
  const Transform base = Transform::log_power(0.75);
  const Transform built =
      combine(combine(base, combinators::Rescale{2.0}), combinators::Affine{3.0, -1.0});
  for (double t : {0.05, 0.2, 0.4}) {
    const double h = 1e-6;
    const double fd = (v(built, t + h) - v(built, t - h)) / (2 * h);
    EXPECT_NEAR(*built.derivative(t), fd, 1e-6 * std::max(1.0, std::abs(fd)));
  }
  const Transform custom = Transform::custom("cube", Interval::open(-1, 1),
                                             [](double t) { return ExtendedReal(t * t * t + t); });
  EXPECT_FALSE(custom.has_derivative());
  EXPECT_FALSE(combine(custom, combinators::Affine{2, 0}).derivative(0.5).has_value());
}

TEST(Combine, ConjLogInterval) {
  const Transform t = combine(Transform::power(0.5), combinators::ConjLog{});
  EXPECT_DOUBLE_EQ(t.interval().lo(), 1.0);
  EXPECT_TRUE(t.interval().lo_closed());
  EXPECT_NEAR(v(t, kE * kE), v(Transform::power(0.5), 2.0), 1e-14);
}

TEST(FMean, KnownValues) {
  EXPECT_NEAR(f_mean(Transform::power(1), 2, 4, 0.5), 3.0, 1e-15);
  EXPECT_NEAR(f_mean(Transform::power(0), 1, 4, 0.5), 2.0, 1e-15);
  EXPECT_NEAR(f_mean(Transform::power(-1), 1, 3, 0.5), 1.5, 1e-15);
  EXPECT_NEAR(f_mean(Transform::log_power(0.5), std::exp(-1.0), std::exp(-9.0), 0.5),
              std::exp(-4.0), 1e-15);
}

TEST(FMean, MinusInfinityConvention) {
  const Transform f = Transform::power_star(2);
  EXPECT_EQ(f_mean(f, 0.0, 3.0, 0.5), 0.0);
  EXPECT_EQ(f_mean(f, 0.0, 3.0, 1.0), 3.0);
  EXPECT_EQ(f_mean(f, 0.0, 3.0, 0.0), 0.0);
}

TEST(FMean, BetweennessAndMonotonicityProperty) {
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  const std::vector<Transform> catalog = {
      Transform::power(-2), Transform::power(0), Transform::power(0.5), Transform::power(3),
      Transform::log_power(-1), Transform::log_power(0), Transform::log_power(0.5),
      Transform::scaled_half_log(3.0, true)};
  for (const Transform& f : catalog) {
    for (int i = 0; i < 200; ++i) {
      const double a = unit(rng);
      const double b = unit(rng);
      const double mu = unit(rng);
      const double m = f_mean(f, a, b, mu);
      EXPECT_GE(m, std::min(a, b));
      EXPECT_LE(m, std::max(a, b));
      EXPECT_NEAR(f_mean(f, a, a, mu), a, 1e-12);
      if (std::abs(b - a) > 1e-3) {
        const double bigger = std::max(a, b) + 0.005;
        EXPECT_LT(m, f_mean(f, a < b ? a : bigger, a < b ? bigger : b, mu)) << f.spec();
      }
    }
  }
}

TEST(PowerMean, KnownValues) {
  EXPECT_NEAR(power_mean(1, 2, 4, 0.5), 3.0, 1e-15);
  EXPECT_NEAR(power_mean(-50, 1, 4, 0.5), 1.0140, 1e-4);
  // high-precision value of (0.5 + 0.5 * 4^-50)^(-1/50)
  EXPECT_NEAR(power_mean(-50, 1, 4, 0.5), 1.0139594797900291, 1e-14);
  const double m50 = power_mean(-50, 1, 4, 0.5);
  const double m500 = power_mean(-500, 1, 4, 0.5);
  EXPECT_GT(m50, m500);
  EXPECT_GT(m500, 1.0);
  EXPECT_LT(m500 - 1.0, 0.0014);
  EXPECT_NEAR(power_mean(0, 1, 4, 0.5), 2.0, 1e-15);
}

TEST(ScalarSlackIdentity, PowerTransforms) {
  // Phi_p(l t) = l^p Phi_p(t) + Phi_p(l)
  for (double p : {-2.0, -1.0, 0.5, 2.0, 3.0}) {
    const Transform f = Transform::power(p);
    for (double lam : {0.3, 0.9, 1.1, 4.0}) {
      for (double t : {0.05, 0.5, 1.0, 7.0}) {
        const double lhs = v(f, lam * t);
        const double rhs = std::pow(lam, p) * v(f, t) + v(f, lam);
        EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs)));
      }
    }
  }
}

TEST(ExponentSlackIdentity, LogPowerTransforms) {
  // L_a(t^r) = r^a L_a(t) + (1 - r^a)/a; L_0(t^r) = L_0(t) - log r
  for (double a : {-1.0, 0.0, 0.5, 1.0}) {
    const Transform f = Transform::log_power(a);
    for (double r : {0.5, 0.9, 2.0}) {
      for (double t : {0.01, 0.3, 0.8}) {
        const double lhs = v(f, std::pow(t, r));
        const double rhs = a == 0 ? v(f, t) - std::log(r)
                                  : std::pow(r, a) * v(f, t) + (1 - std::pow(r, a)) / a;
        EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs)));
      }
    }
  }
}

TEST(Inverse, RoundTripProperty) {
  const std::vector<Transform> catalog = {
      Transform::power(-1), Transform::power(0), Transform::power(2), Transform::power_star(1.5),
      Transform::log_power(-1), Transform::log_power(0), Transform::log_power(0.5),
      Transform::log_power(2), Transform::scaled_half_log(2, false),
      Transform::scaled_half_log(std::exp(100.0), true),
      combine(Transform::power(0), combinators::ConjExp{}),
      combine(Transform::power(1), combinators::Reflect{}),
      combine(Transform::log_power(0.5), combinators::Rescale{0.5})};
  for (const Transform& f : catalog) {
    for (double t : interior_samples(f.interval(), 997)) {
      const double back = f.inverse(f.eval(t));
      EXPECT_LE(std::abs(back - t) / std::max(1.0, std::abs(t)), 1e-12) << f.spec() << " at " << t;
    }
  }
  EXPECT_EQ(Transform::power(0).inverse(ExtendedReal::minus_infinity()), 0.0);
  EXPECT_THROW(Transform::power(1).inverse(ExtendedReal::minus_infinity()), DomainError);
  EXPECT_THROW(Transform::power(-1).inverse(ExtendedReal(5.0)), DomainError);
}

TEST(Inverse, CustomTransformsBisect) {
  const Transform f = Transform::custom("cubic", Interval::half_line(0.0),
                                        [](double t) { return ExtendedReal(t * t * t + t); });
  for (double t : {0.0, 0.3, 2.0, 50.0}) EXPECT_NEAR(f.inverse(f.eval(t)), t, 1e-12 * std::max(1.0, t));
}

TEST(HighPrecisionEval, AgreesWithDouble) {
  const Transform f = combine(Transform::log_power(0.45), combinators::Affine{2.0, 0.5});
  for (double t : {0.001, 0.2, 0.7, 0.999}) {
    const auto hp = f.eval(HighPrecision(t));
    EXPECT_NEAR(static_cast<double>(hp.value()), v(f, t), 1e-14);
  }
  EXPECT_TRUE(Transform::power(0).eval(HighPrecision(0)).is_minus_infinity());
}

TEST(Audit, KnownValues) {
  EXPECT_TRUE(admissibility_audit(Transform::power(2), 10000).pass);
  EXPECT_TRUE(admissibility_audit(Transform::log_power(-1), 10000).pass);
  const Transform bad = Transform::custom("negated", Interval::open(0, 1),
                                          [](double t) { return ExtendedReal(-t); });
  const AuditReport rep = admissibility_audit(bad, 100);
  EXPECT_FALSE(rep.pass);
  ASSERT_FALSE(rep.monotonicity_failures.empty());
  EXPECT_LT(rep.monotonicity_failures[0].tau_lo, rep.monotonicity_failures[0].tau_hi);
  EXPECT_THROW(admissibility_audit(Transform::power(1), 1), PreconditionError);
}

TEST(SpecString, ParsesGrammar) {
  EXPECT_NEAR(v(parse_transform("power:p=0.5"), 4.0), 2.0, 1e-15);
  EXPECT_NEAR(v(parse_transform("logpower:alpha=0.5"), std::exp(-4.0)), -2.0, 1e-14);
  EXPECT_NEAR(v(parse_transform("halflogk:k=2,normalized=true"), 1.0), 0.0, 1e-15);
  const Transform a = parse_transform("affine:A=2,B=1(power:p=0)");
  EXPECT_NEAR(v(a, kE), 3.0, 1e-15);
  EXPECT_EQ(parse_transform("reflect(power:p=1)").interval().hi(), 0.0);
  EXPECT_NEAR(v(parse_transform("halflogk:logk=100,normalized=true"), 1.0), 0.0, 1e-13);
}

TEST(SpecString, RoundTripsThroughCanonicalForm) {
  for (const char* s : {"power:p=0.5", "powerstar:p=2", "logpower:alpha=-1",
                        "halflogk:k=2,normalized=true", "affine:A=3,B=-1(power:p=0)",
                        "restrict:lo=0,hi=1,lo_closed=true,hi_closed=false(power:p=0)",
                        "conjexp(power:p=-1)", "conjlog(logpower:alpha=0.5)",
                        "rescale:lambda=0.5(reflect(power:p=1))"}) {
    const Transform t = parse_transform(s);
    EXPECT_EQ(parse_transform(t.spec()).spec(), t.spec()) << s;
  }
  EXPECT_EQ(parse_transform("power:p=0.5").spec(), "power:p=0.5");
}

TEST(SpecString, RejectsMalformed) {
  EXPECT_THROW(parse_transform("power"), PreconditionError);
  EXPECT_THROW(parse_transform("power:q=1"), PreconditionError);
  EXPECT_THROW(parse_transform("power:p=1,p=2"), PreconditionError);
  EXPECT_THROW(parse_transform("power:p=abc"), PreconditionError);
  EXPECT_THROW(parse_transform("affine:A=1,B=0"), PreconditionError);
  EXPECT_THROW(parse_transform("wibble:p=1"), PreconditionError);
  EXPECT_THROW(parse_transform("affine:A=1,B=0(power:p=1"), PreconditionError);
}

}  // namespace
}  // namespace fconc
