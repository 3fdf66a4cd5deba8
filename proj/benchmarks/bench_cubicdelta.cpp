#include <benchmark/benchmark.h>

#include "cubicdelta/analytic.hpp"
#include "cubicdelta/delta.hpp"
#include "cubicdelta/expsums.hpp"
#include "cubicdelta/pointcount.hpp"

using namespace cubicdelta;

static void BM_SeparablePrimePower(benchmark::State& state) {
  const auto F = DiagonalCubicForm::fermat(static_cast<int>(state.range(0)));
  const u64 p = static_cast<u64>(state.range(1));
  IVec c(static_cast<size_t>(F.m()), 1);
  c[1] = 2;
  for (auto _ : state) {
    ExpSumEvaluator E(F);
    benchmark::DoNotOptimize(E.prime_power(c, p, 2));
  }
}
BENCHMARK(BM_SeparablePrimePower)->Args({4, 7})->Args({4, 31})->Args({6, 7})->Args({6, 31});

static void BM_ExpSumBrute(benchmark::State& state) {
  const auto F = DiagonalCubicForm::fermat(4);
  const IVec c{1, -1, 2, -2};
  const u64 n = static_cast<u64>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(expsum_brute(F, c, n).value);
}
BENCHMARK(BM_ExpSumBrute)->Arg(25)->Arg(49)->Arg(121);

static void BM_CountVc(benchmark::State& state) {
  const auto F = DiagonalCubicForm::fermat(static_cast<int>(state.range(0)));
  IVec c(static_cast<size_t>(F.m()), 1);
  for (auto _ : state) benchmark::DoNotOptimize(count_Vc(F, c, static_cast<u64>(state.range(1))).affine_cone_count);
}
BENCHMARK(BM_CountVc)->Args({4, 37})->Args({6, 37})->Args({6, 61});

static void BM_DeltaSum(benchmark::State& state) {
  DeltaKernel K(static_cast<double>(state.range(0)));
  i64 t = 0;
  for (auto _ : state) benchmark::DoNotOptimize(K.delta_sum(t++ % 7));
}
BENCHMARK(BM_DeltaSum)->Arg(16)->Arg(64);

static void BM_OscIntegral(benchmark::State& state) {
  const auto F = DiagonalCubicForm::fermat(4);
  const auto w = WeightSpec::default_for(4);
  DeltaKernel K(std::pow(6.0, 1.5));
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(osc_integral(F, w, K, {1, 0, -1, 2}, 5, 6, grid));
}
BENCHMARK(BM_OscIntegral)->Arg(16)->Arg(24);

static void BM_DirectCount(benchmark::State& state) {
  const auto F = DiagonalCubicForm::fermat(4);
  const auto w = WeightSpec::default_for(4);
  for (auto _ : state) benchmark::DoNotOptimize(direct_count(F, w, static_cast<double>(state.range(0))));
}
BENCHMARK(BM_DirectCount)->Arg(200)->Arg(800);
BENCHMARK_MAIN();
