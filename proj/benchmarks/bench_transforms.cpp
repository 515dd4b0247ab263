#include <benchmark/benchmark.h>

#include "fconc/high_precision.hpp"
#include "fconc/transform.hpp"
#include "fconc/transform_spec.hpp"

namespace {

using namespace fconc;

void BM_PowerEval(benchmark::State& state) {
  const Transform F = Transform::power(0.5);
  double tau = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(F.eval(tau));
    tau = tau < 10 ? tau * 1.001 : 0.1;
  }
}
BENCHMARK(BM_PowerEval);

void BM_LogPowerRoundTrip(benchmark::State& state) {
  const Transform F = Transform::log_power(0.5);
  double tau = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(F.inverse(F.eval(tau)));
    tau = tau < 0.99 ? tau * 1.001 : 0.01;
  }
}
BENCHMARK(BM_LogPowerRoundTrip);

// evaluation through a stack of combinators
void BM_ComposedEval(benchmark::State& state) {
  const Transform F = parse_transform("rescale:lambda=0.5(affine:A=3,B=-1(logpower:alpha=0.5))");
  double tau = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(F.eval(tau));
    tau = tau < 1 ? tau * 1.001 : 0.01;
  }
}
BENCHMARK(BM_ComposedEval);

void BM_HighPrecisionEval(benchmark::State& state) {
  const Transform F = Transform::log_power(0.5);
  const HighPrecision tau("0.3");
  for (auto _ : state) benchmark::DoNotOptimize(F.eval(tau));
}
BENCHMARK(BM_HighPrecisionEval);

void BM_ParseTransform(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parse_transform("conjexp(affine:A=2,B=0.5(power:p=-1))"));
}
BENCHMARK(BM_ParseTransform);

}  // namespace
