#include <benchmark/benchmark.h>

#include "couponrace/harmonic.hpp"
#include "couponrace/sim.hpp"
#include "couponrace/solver.hpp"
#include "couponrace/tie_skeleton.hpp"

namespace {

void BM_SolveF64(benchmark::State& state) {
  const std::int64_t d = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(couponrace::solve_f64(d).b);
  }
  state.SetComplexityN(d);
}
BENCHMARK(BM_SolveF64)->Arg(100)->Arg(1000)->Arg(4000)->Complexity();

void BM_SolveExact(benchmark::State& state) {
  const std::int64_t d = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(couponrace::solve_exact(d).b);
  }
}
BENCHMARK(BM_SolveExact)->Arg(16)->Arg(32)->Arg(64);

void BM_FirstBreakLaw(benchmark::State& state) {
  const std::int64_t d = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(couponrace::first_break_law(d).rho);
  }
}
BENCHMARK(BM_FirstBreakLaw)->Arg(1000)->Arg(100000);

void BM_VisitMeasure(benchmark::State& state) {
  const std::int64_t d = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(couponrace::visit_measure<double>(d, 0, 0).tie);
  }
}
BENCHMARK(BM_VisitMeasure)->Arg(100)->Arg(1000);

void BM_RoundTrials(benchmark::State& state) {
  const std::int64_t d = state.range(0);
  std::uint64_t i = 0;
  for (auto _ : state) {
    couponrace::TrialRng rng(1, i++);
    benchmark::DoNotOptimize(couponrace::simulate_round_trial(d, rng).winner);
  }
}
BENCHMARK(BM_RoundTrials)->Arg(20)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
