#include <cmath>

#include <benchmark/benchmark.h>

#include "fconc/concavity.hpp"
#include "fconc/domain.hpp"
#include "fconc/field.hpp"
#include "fconc/screens.hpp"
#include "fconc/transform.hpp"

namespace {

using namespace fconc;

// all O(n^2) triples of a 1D grid
void BM_Check1D(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Field g = Field::sample(Domain::interval(-3, 3, n), [](Point p) { return std::exp(-p.x * p.x); });
  const Transform F = Transform::log_power(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(check_f_concave(F, g, 1e-9));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Check1D)->RangeMultiplier(2)->Range(101, 801)->Complexity(benchmark::oNSquared);

void BM_Check2DSquare(benchmark::State& state) {
  const double h = 1.0 / static_cast<double>(state.range(0));
  const Field g = Field::sample(Domain::unit_square(h), [](Point p) {
    return std::exp(-(p.x - 0.5) * (p.x - 0.5) - (p.y - 0.5) * (p.y - 0.5));
  });
  const Transform F = Transform::power(0);
  for (auto _ : state) benchmark::DoNotOptimize(check_f_concave(F, g, 1e-9));
}
BENCHMARK(BM_Check2DSquare)->Arg(10)->Arg(20);

void BM_Quasiconcave1D(benchmark::State& state) {
  const Field g = Field::sample(Domain::interval(-3, 3, 401), [](Point p) { return std::exp(-p.x * p.x); });
  for (auto _ : state) benchmark::DoNotOptimize(check_quasiconcave(g, 1e-9));
}
BENCHMARK(BM_Quasiconcave1D);

void BM_GaussianScreen(benchmark::State& state) {
  const Transform F = Transform::log_power(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_screen(F, {0.5, 1}, 3, 0.01));
}
BENCHMARK(BM_GaussianScreen);

}  // namespace
