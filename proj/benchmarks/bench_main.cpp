#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "hclab/functionals.hpp"
#include "hclab/solver.hpp"
#include "hclab/verify.hpp"

using namespace hclab;

namespace {

struct Fixture {
  GridPtr grid;
  RieszOperator op;
  RadialField f;
  explicit Fixture(int n)
      : grid(make_symmetric_grid(3, 12.0, n)), op(make_params(3, 2.0, 0.0), grid), f(gaussian_bump(grid, 0.0, 2.0)) {}
};

void BM_riesz_fft(benchmark::State& state) {
  const Fixture fx(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fx.op.apply_fft(fx.f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_riesz_fft)->RangeMultiplier(4)->Range(1024, 16384)->Unit(benchmark::kMicrosecond)->Complexity();

void BM_riesz_dense(benchmark::State& state) {
  const Fixture fx(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fx.op.apply_dense(fx.f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_riesz_dense)->RangeMultiplier(4)->Range(1024, 16384)->Unit(benchmark::kMillisecond)->Complexity();

void BM_operator_setup(benchmark::State& state) {
  const auto grid = make_symmetric_grid(3, 12.0, static_cast<int>(state.range(0)));
  const auto p = make_params(3, 1.5, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(RieszOperator(p, grid));
}
BENCHMARK(BM_operator_setup)->Arg(2048)->Arg(16384)->Unit(benchmark::kMillisecond);

void BM_rayleigh(benchmark::State& state) {
  const Fixture fx(static_cast<int>(state.range(0)));
  const auto p = make_params(3, 2.0, 0.16);
  for (auto _ : state) benchmark::DoNotOptimize(rayleigh(p, fx.op, fx.f));
}
BENCHMARK(BM_rayleigh)->Arg(2048)->Unit(benchmark::kMicrosecond);

void BM_minimize(benchmark::State& state) {
  const auto p = make_params(3, 2.0, state.range(1) / 100.0);
  const auto grid = make_symmetric_grid(3, 12.0, static_cast<int>(state.range(0)));
  const RieszOperator op(p, grid);
  const auto init = default_init(p, grid);
  int iterations = 0;
  for (auto _ : state) {
    const auto r = minimize(p, op, init, SolveOptions{});
    iterations = r.iterations;
    benchmark::DoNotOptimize(r.s_theta);
  }
  state.counters["iterations"] = iterations;
}
BENCHMARK(BM_minimize)->Args({2048, 0})->Args({2048, 16})->Args({8192, 16})->Unit(benchmark::kMillisecond);

// Cold start from a random init against the last leg of a warm-started ramp.
void BM_continuation(benchmark::State& state) {
  const auto grid = make_symmetric_grid(3, 12.0, 2048);
  const auto target = make_params(3, 2.0, 0.16);
  SolveOptions opts;
  opts.continuation_steps = static_cast<int>(state.range(0));
  const OperatorFactory factory = [&](const ProblemParams& q) { return std::make_shared<const RieszOperator>(q, grid); };
  int last_leg = 0, total = 0;
  for (auto _ : state) {
    const auto legs = continuation(target, factory, grid, opts);
    last_leg = legs.back().iterations;
    total = 0;
    for (const auto& l : legs) total += l.iterations;
  }
  state.counters["last_leg_iterations"] = last_leg;
  state.counters["total_iterations"] = total;
}
BENCHMARK(BM_continuation)->Arg(0)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
