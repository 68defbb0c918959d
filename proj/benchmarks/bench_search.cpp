#include <benchmark/benchmark.h>

#include "unitsq/exact_arith.hpp"
#include "unitsq/search.hpp"
#include "unitsq/table.hpp"

using namespace unitsq;

namespace {

void BM_FindRepresentable(benchmark::State& state) {
  SearchConstraints cons;
  const std::int64_t m = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(find_representation(m, cons));
}
BENCHMARK(BM_FindRepresentable)->Arg(338)->Arg(2000)->Arg(9498)->Unit(benchmark::kMillisecond);

void BM_FindNone(benchmark::State& state) {
  SearchConstraints cons;
  const std::int64_t m = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(find_representation(m, cons));
}
BENCHMARK(BM_FindNone)->Arg(400)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_WindowBound(benchmark::State& state) {
  SearchConstraints cons;
  cons.t = 6;
  SearchOptions opts;
  opts.window_bound = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(find_representation(2578, cons, nullptr, opts));
}
BENCHMARK(BM_WindowBound)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Arithmetic(benchmark::State& state) {
  SearchConstraints cons;
  SearchOptions opts;
  opts.arithmetic = state.range(0) ? Arithmetic::kBig : Arithmetic::kAuto;
  for (auto _ : state) benchmark::DoNotOptimize(find_representation(1500, cons, nullptr, opts));
}
BENCHMARK(BM_Arithmetic)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Enumerate(benchmark::State& state) {
  SearchConstraints cons;
  EnumerateOptions opts;
  opts.jobs = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_range(1, 1000, cons, {}, opts));
}
BENCHMARK(BM_Enumerate)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_IrootFloor(benchmark::State& state) {
  const BigInt n = pow(BigInt(123456789), 9);
  for (auto _ : state) benchmark::DoNotOptimize(iroot_floor(n, 3));
}
BENCHMARK(BM_IrootFloor);

}  // namespace

BENCHMARK_MAIN();
