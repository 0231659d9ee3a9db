#include <benchmark/benchmark.h>

#include "acalc/model_symbols.hpp"

using namespace acalc;

namespace {

ModelShape shape() { return model_shape(make_tower({1, 1, 1}, 1, {1, 1})); }

// diagonal family: the model Laplacian on the default grid
void BM_LaplacianSerial(benchmark::State& st) {
  auto p = model_laplacian(shape(), CQ(-1));
  for (auto _ : st) benchmark::DoNotOptimize(sweep_serial(p, {{0, 0}}, Grid{}, 8));
}

void BM_LaplacianParallel(benchmark::State& st) {
  auto p = model_laplacian(shape(), CQ(-1));
  for (auto _ : st) benchmark::DoNotOptimize(sweep_parallel(p, {{0, 0}}, Grid{}, 8));
}

// w-dependent coefficients: one SVD per grid point
ADiffOp coupled() {
  ModelShape s = shape();
  return model_laplacian(s, CQ(-1)) + op_multiply(s, Coeff::monomial(CQ(qq(1, 2)), 0, {0, 0, 1}) +
                                                         Coeff::monomial(CQ(qq(1, 2)), 0, {0, 0, -1}));
}

void BM_CoupledSerial(benchmark::State& st) {
  auto p = coupled();
  for (auto _ : st) benchmark::DoNotOptimize(sweep_serial(p, {{0, 0}}, Grid{4, 0.5}, 4));
}

void BM_CoupledParallel(benchmark::State& st) {
  auto p = coupled();
  for (auto _ : st) benchmark::DoNotOptimize(sweep_parallel(p, {{0, 0}}, Grid{4, 0.5}, 4));
}

}  // namespace

BENCHMARK(BM_LaplacianSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LaplacianParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CoupledSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoupledParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
