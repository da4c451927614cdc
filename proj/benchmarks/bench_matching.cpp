#include <benchmark/benchmark.h>

#include "scholarlite/citation.hpp"
#include "scholarlite/ingest.hpp"
#include "scholarlite/store.hpp"
#include "scholarlite/synth.hpp"
#include "scholarlite/text.hpp"

using namespace scholarlite;

namespace {

std::shared_ptr<CorpusStore> corpus_of(std::int64_t n) {
    CorpusConfig config = CorpusConfig::defaults();
    config.seed = 1234;
    config.n_documents = n;
    config.duplicate_rate = 0.0;
    config.stub_reference_rate = 0.0;
    auto generated = generate_corpus(config).value();
    auto store = std::make_shared<CorpusStore>();
    for (const auto& snap : generated.snapshots) {
        ingest_snapshot(snap, *store).value();
    }
    return store;
}

}  // namespace

static void BM_title_similarity(benchmark::State& state) {
    const std::string a = "Adaptive lattices annealing of amaranth anvil aurora frost";
    const std::string b = "Adaptive lattices annealing of amaranth anvil aurora foam";
    for (auto _ : state) {
        benchmark::DoNotOptimize(title_similarity(a, b));
    }
}
BENCHMARK(BM_title_similarity);

static void BM_parse_reference(benchmark::State& state) {
    const std::string ref =
        "Garfield, E. (1964). Science Citation Index: A new dimension in indexing, "
        "Science 144(3619), 649-654";
    for (auto _ : state) {
        benchmark::DoNotOptimize(parse_reference(ref));
    }
}
BENCHMARK(BM_parse_reference);

static void BM_match_reference(benchmark::State& state) {
    auto store = corpus_of(state.range(0));
    auto any = store->all_records().front();
    ParsedReference ref;
    ref.title = any.title;
    ref.first_author_surname = any.authors.front().surname;
    ref.year = any.pub_year;
    for (auto _ : state) {
        benchmark::DoNotOptimize(match_reference(ref, *store));
    }
}
BENCHMARK(BM_match_reference)->Arg(1000)->Arg(4000)->Unit(benchmark::kMicrosecond);

static void BM_detect_versions(benchmark::State& state) {
    CorpusConfig config = CorpusConfig::defaults();
    config.seed = 99;
    config.n_documents = state.range(0);
    config.duplicate_rate = 0.1;
    config.stub_reference_rate = 0.0;
    auto generated = generate_corpus(config).value();
    auto store = std::make_shared<CorpusStore>();
    for (const auto& snap : generated.snapshots) {
        ingest_snapshot(snap, *store).value();
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(detect_versions(*store));
    }
}
BENCHMARK(BM_detect_versions)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
