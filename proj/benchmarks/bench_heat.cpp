#include <cmath>

#include <benchmark/benchmark.h>

#include "fconc/domain.hpp"
#include "fconc/field.hpp"
#include "fconc/harness.hpp"
#include "fconc/heat.hpp"

namespace {

using namespace fconc;

void BM_Evolve1D(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Field f = Field::sample(Domain::interval(0, 1, n), [](Point p) { return p.x > 0.45 && p.x < 0.55 ? 1.0 : 0.0; });
  for (auto _ : state) benchmark::DoNotOptimize(fd_evolve(f, {0.01}, 1e-4));
}
BENCHMARK(BM_Evolve1D)->Arg(101)->Arg(401)->Arg(1601)->Unit(benchmark::kMillisecond);

void BM_Evolve2D(benchmark::State& state) {
  const double h = 1.0 / static_cast<double>(state.range(0));
  const Field f = Field::sample(Domain::unit_square(h), [](Point p) { return std::sin(M_PI * p.x) * std::sin(M_PI * p.y); });
  for (auto _ : state) benchmark::DoNotOptimize(fd_evolve(f, {0.01}, 1e-3));
}
BENCHMARK(BM_Evolve2D)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_EigenInterval(benchmark::State& state) {
  const Domain d = Domain::interval_with_spacing(0, 1, 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(first_eigenpair(d));
}
BENCHMARK(BM_EigenInterval)->Unit(benchmark::kMillisecond);

void BM_EigenSquare(benchmark::State& state) {
  const Domain d = Domain::unit_square(1.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(first_eigenpair(d));
}
BENCHMARK(BM_EigenSquare)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_KernelConvolve(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(kernel_convolve(BallIndicator{}, 0.5, Point{0.3, 0.2}, 2));
}
BENCHMARK(BM_KernelConvolve);

void BM_HarnessExperiment(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment("P4.2"));
}
BENCHMARK(BM_HarnessExperiment)->Unit(benchmark::kMillisecond);

}  // namespace
