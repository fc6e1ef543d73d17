#include <benchmark/benchmark.h>

#include "ecexp/sieve.hpp"
#include "ecexp/sweep.hpp"

using namespace ecexp;

namespace {

const std::vector<u64>& bench_primes(u64 X) {
  static std::map<u64, std::vector<u64>> cache;
  auto& v = cache[X];
  if (v.empty()) v = primes_in(2, X + 1).primes;
  return v;
}

void BM_LocalDataSerial(benchmark::State& state) {
  const CurveZ curve(1, 1);
  const auto& primes = bench_primes(static_cast<u64>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(local_data_serial(curve, primes, 0));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(primes.size()));
}

void BM_LocalDataParallel(benchmark::State& state) {
  const CurveZ curve(1, 1);
  const auto& primes = bench_primes(static_cast<u64>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(local_data_parallel(curve, primes, 0));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(primes.size()));
}

void BM_SieveSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(primes_in(2, static_cast<u64>(state.range(0))));
}

void BM_SieveParallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(primes_in_parallel(2, static_cast<u64>(state.range(0))));
  }
}

}  // namespace

BENCHMARK(BM_LocalDataSerial)->Arg(20000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LocalDataParallel)->Arg(20000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SieveSerial)->Arg(10'000'000)->Arg(100'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SieveParallel)->Arg(10'000'000)->Arg(100'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
