#include <benchmark/benchmark.h>

#include "scholarlite/citation.hpp"
#include "scholarlite/estimation.hpp"
#include "scholarlite/ingest.hpp"
#include "scholarlite/query.hpp"
#include "scholarlite/store.hpp"
#include "scholarlite/synth.hpp"

using namespace scholarlite;

namespace {

std::shared_ptr<CorpusStore> pipeline_corpus(std::int64_t n) {
    CorpusConfig config = CorpusConfig::defaults();
    config.seed = 31;
    config.n_documents = n;
    auto generated = generate_corpus(config).value();
    auto store = std::make_shared<CorpusStore>();
    for (const auto& snap : generated.snapshots) {
        ingest_snapshot(snap, *store).value();
    }
    link_all_references(*store);
    merge_all_versions(*store);
    return store;
}

}  // namespace

static void BM_execute_term_query(benchmark::State& state) {
    auto store = pipeline_corpus(state.range(0));
    QueryEngine engine(*store);
    Query q = parse_query("annealing year:2000..2016").value();
    for (auto _ : state) {
        benchmark::DoNotOptimize(engine.execute(q, 0, 20));
    }
}
BENCHMARK(BM_execute_term_query)->Arg(1000)->Arg(4000)->Unit(benchmark::kMicrosecond);

static void BM_hit_count_estimate(benchmark::State& state) {
    auto store = pipeline_corpus(state.range(0));
    QueryEngine engine(*store);
    Query q;
    q.year_range = {2005, 2005};
    q.include_citations = false;
    for (auto _ : state) {
        benchmark::DoNotOptimize(engine.hit_count_estimate(q));
    }
}
BENCHMARK(BM_hit_count_estimate)->Arg(1000)->Arg(4000)->Unit(benchmark::kMicrosecond);

static void BM_estimate_absurd(benchmark::State& state) {
    auto store = pipeline_corpus(2000);
    QueryEngine engine(*store);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            estimate_absurd(engine, CorpusConfig::defaults().year_range));
    }
}
BENCHMARK(BM_estimate_absurd)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
