#include <benchmark/benchmark.h>

#include "scholarlite/citation.hpp"
#include "scholarlite/ingest.hpp"
#include "scholarlite/store.hpp"
#include "scholarlite/synth.hpp"

using namespace scholarlite;

static void BM_ingest_snapshots(benchmark::State& state) {
    CorpusConfig config = CorpusConfig::defaults();
    config.seed = 7;
    config.n_documents = state.range(0);
    config.stub_reference_rate = 0.0;
    auto generated = generate_corpus(config).value();
    for (auto _ : state) {
        CorpusStore store;
        for (const auto& snap : generated.snapshots) {
            benchmark::DoNotOptimize(ingest_snapshot(snap, store));
        }
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ingest_snapshots)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_full_pipeline(benchmark::State& state) {
    CorpusConfig config = CorpusConfig::defaults();
    config.seed = 7;
    config.n_documents = state.range(0);
    auto generated = generate_corpus(config).value();
    for (auto _ : state) {
        CorpusStore store;
        for (const auto& snap : generated.snapshots) {
            benchmark::DoNotOptimize(ingest_snapshot(snap, store));
        }
        benchmark::DoNotOptimize(link_all_references(store));
        benchmark::DoNotOptimize(merge_all_versions(store));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_full_pipeline)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
