#include <benchmark/benchmark.h>

#include <random>

#include "scholarlite/bibliometrics.hpp"

using namespace scholarlite;

static void BM_h_index(benchmark::State& state) {
    std::mt19937 rng(5);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(state.range(0)));
    for (auto& c : counts) c = static_cast<std::int64_t>(rng() % 500);
    for (auto _ : state) {
        benchmark::DoNotOptimize(h_index(counts));
    }
}
BENCHMARK(BM_h_index)->Arg(50)->Arg(1000)->Arg(10000);

static void BM_h5_from_counts(benchmark::State& state) {
    std::mt19937 rng(5);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(state.range(0)));
    for (auto& c : counts) c = static_cast<std::int64_t>(rng() % 500);
    for (auto _ : state) {
        benchmark::DoNotOptimize(h5_from_counts(counts));
    }
}
BENCHMARK(BM_h5_from_counts)->Arg(50)->Arg(1000);

BENCHMARK_MAIN();
