#include <doctest.h>

#include <atomic>
#include <chrono>
#include <random>
#include <sstream>
#include <thread>

#include "scholarlite/store.hpp"

using namespace scholarlite;

namespace {

DocumentRecord make_full(const std::string& title, int year,
                         const std::string& surname = "Ashford",
                         const std::string& domain = "repo.example.edu") {
    DocumentRecord r;
    r.kind = RecordKind::full;
    r.title = title;
    r.authors.push_back({surname, "A.", std::nullopt});
    r.pub_year = year;
    r.language = Language::english;
    VersionRef v;
    v.url = "https://" + domain + "/p/" + title;
    v.source_domain = domain;
    v.source_type = SourceType::repository;
    v.byte_size = 1000;
    v.has_searchable_text = true;
    r.versions.push_back(v);
    r.primary_version = 0;
    r.indexed_at = {2017, 3, 1};
    return r;
}

DocumentRecord make_stub(const std::string& title, std::optional<int> year = std::nullopt) {
    DocumentRecord r;
    r.kind = RecordKind::citation_stub;
    r.stub_linkage = StubLinkage::unlinked;
    r.title = title;
    r.pub_year = year;
    r.indexed_at = {2017, 3, 1};
    return r;
}

}  // namespace

TEST_CASE("upsert and get round-trip") {
    CorpusStore store;
    auto id = store.upsert_record(make_full("A study of things", 2010));
    REQUIRE(id.ok());
    auto fetched = store.get_record(id.value());
    REQUIRE(fetched.has_value());
    CHECK(fetched->title == "A study of things");
    CHECK(fetched->pub_year == 2010);
    CHECK(fetched->record_id == id.value());
}

TEST_CASE("stub with versions is rejected with the named invariant") {
    CorpusStore store;
    DocumentRecord bad = make_full("Bad stub", 2010);
    bad.kind = RecordKind::citation_stub;
    bad.stub_linkage = StubLinkage::unlinked;
    auto res = store.upsert_record(bad);
    REQUIRE(!res.ok());
    CHECK(res.error().code == "stub-has-versions");
}

TEST_CASE("full record without a primary version is rejected") {
    CorpusStore store;
    DocumentRecord bad = make_full("No primary", 2010);
    bad.primary_version.reset();
    auto res = store.upsert_record(bad);
    REQUIRE(!res.ok());
    CHECK(res.error().code == "missing-primary-version");
}

TEST_CASE("second upsert with the same id wins") {
    CorpusStore store;
    auto id = store.upsert_record(make_full("First title", 2010)).value();
    DocumentRecord updated = make_full("Second title", 2010);
    updated.record_id = id;
    REQUIRE(store.upsert_record(updated).ok());
    CHECK(store.get_record(id)->title == "Second title");
    CHECK(store.size() == 1);
}

TEST_CASE("unknown and removed ids come back not found") {
    CorpusStore store;
    CHECK(!store.get_record("r99999999").has_value());
    auto id = store.upsert_record(make_full("Soon gone", 2010)).value();
    REQUIRE(store.remove_record(id));
    CHECK(!store.get_record(id).has_value());
}

TEST_CASE("year bounds and self-citation invariants") {
    CorpusStore store(2017);
    DocumentRecord early = make_full("Too early", 1499);
    CHECK(store.upsert_record(early).error().code == "year-out-of-range");
    DocumentRecord late = make_full("Too late", 2019);
    CHECK(store.upsert_record(late).error().code == "year-out-of-range");
    DocumentRecord edge = make_full("Advance online", 2018);
    CHECK(store.upsert_record(edge).ok());

    DocumentRecord self = make_full("Self cite", 2010);
    self.record_id = "rSELF";
    self.cited_by.insert("rSELF");
    CHECK(store.upsert_record(self).error().code == "self-citation");
}

TEST_CASE("count_records filters") {
    CorpusStore store;
    CHECK(store.count_records() == 0);

    for (int i = 0; i < 3; ++i) {
        REQUIRE(store.upsert_record(make_full("Full number " + std::to_string(i), 2009)).ok());
    }
    REQUIRE(store.upsert_record(make_full("Another year", 2012)).ok());
    REQUIRE(store.upsert_record(make_stub("Stub one", 2009)).ok());
    REQUIRE(store.upsert_record(make_stub("Stub two")).ok());

    RecordFilter fulls;
    fulls.kind = RecordKind::full;
    CHECK(store.count_records(fulls) == 4);

    RecordFilter year2009;
    year2009.year_range = {2009, 2009};
    CHECK(store.count_records(year2009) == 4);  // 3 fulls + 1 year-stamped stub

    RecordFilter english;
    english.language = Language::english;
    CHECK(store.count_records(english) == 4);

    CHECK(store.count_records() == 6);
}

TEST_CASE("count equals upserted minus removed") {
    CorpusStore store;
    std::vector<RecordId> ids;
    for (int i = 0; i < 10; ++i) {
        ids.push_back(store.upsert_record(make_full("Doc " + std::to_string(i), 2000 + i)).value());
    }
    for (int i = 0; i < 4; ++i) REQUIRE(store.remove_record(ids[static_cast<std::size_t>(i)]));
    CHECK(store.count_records() == 6);
}

TEST_CASE("referential integrity: every cited_by id resolves") {
    CorpusStore store;
    std::mt19937 rng(7);
    std::vector<RecordId> ids;
    for (int i = 0; i < 40; ++i) {
        ids.push_back(store.upsert_record(make_full("Doc " + std::to_string(i), 2001)).value());
    }
    for (int e = 0; e < 200; ++e) {
        const auto a = ids[rng() % ids.size()];
        const auto b = ids[rng() % ids.size()];
        if (a != b) store.add_citation(a, b);
    }
    // Removing records must retract the citations they provided.
    for (int i = 0; i < 5; ++i) store.remove_record(ids[static_cast<std::size_t>(i)]);

    store.for_each([&](const DocumentRecord& r) {
        for (const RecordId& citer : r.cited_by) {
            CHECK(store.get_record(citer).has_value());
        }
    });
}

TEST_CASE("serialize-deserialize-reserialize is byte-identical") {
    CorpusStore store;
    for (int i = 0; i < 25; ++i) {
        DocumentRecord r = make_full("Round trip " + std::to_string(i), 1990 + i % 20,
                                     i % 2 ? "Beltran" : "Ashford");
        if (i % 3 == 0) r.abstract = "An abstract with unicode: protégé";
        if (i % 4 == 0) r.online_at = Date{2017, 1, (i % 27) + 1};
        if (i % 5 == 0) r.raw_references = {"Someone, A. (1990). Something.", "[2] Other ref 2001"};
        REQUIRE(store.upsert_record(r).ok());
    }
    REQUIRE(store.upsert_record(make_stub("A stub", 2001)).ok());
    auto ids = store.all_ids();
    store.add_citation(ids[0], ids[1]);
    store.add_citation(ids[2], ids[1]);

    std::ostringstream first;
    store.serialize(first);
    std::istringstream in(first.str());
    auto reloaded = CorpusStore::deserialize(in);
    REQUIRE(reloaded.ok());
    std::ostringstream second;
    reloaded.value()->serialize(second);
    CHECK(first.str() == second.str());
}

TEST_CASE("retire_into forwards lookups and rewrites citers") {
    CorpusStore store;
    auto a = store.upsert_record(make_full("Copy A", 2010)).value();
    auto b = store.upsert_record(make_full("Copy B", 2010)).value();
    auto x = store.upsert_record(make_full("Citer X", 2012)).value();
    store.add_citation(b, x);  // retired record cites X
    store.add_citation(x, b);  // and is cited by X

    store.retire_into(b, a);
    CHECK(!store.exists(b));
    CHECK(store.resolve(b) == a);
    CHECK(store.get_record(b)->record_id == a);  // forwarded
    const auto citer_view = store.get_record(x);
    CHECK(citer_view->cited_by.count(a) == 1);
    CHECK(citer_view->cited_by.count(b) == 0);
}

TEST_CASE("concurrent readers during writes") {
    auto store = std::make_shared<CorpusStore>();
    for (int i = 0; i < 50; ++i) {
        REQUIRE(store->upsert_record(make_full("Seed " + std::to_string(i), 2000)).ok());
    }
    // Readers pause between scans; an unbroken stream of shared locks can
    // starve the writer on reader-preferring rwlock implementations.
    std::vector<std::thread> readers;
    for (int t = 0; t < 4; ++t) {
        readers.emplace_back([&] {
            for (int i = 0; i < 100; ++i) {
                volatile auto n = store->count_records();
                (void)n;
                store->for_each([](const DocumentRecord&) {});
                std::this_thread::sleep_for(std::chrono::microseconds(200));
            }
        });
    }
    for (int i = 0; i < 200; ++i) {
        REQUIRE(store->upsert_record(make_full("W " + std::to_string(i), 2001)).ok());
    }
    for (auto& r : readers) r.join();
    CHECK(store->count_records() == 250);
}

TEST_CASE("record deserialization rejects malformed lines without crashing") {
    CHECK(!CorpusStore::record_from_json_line("").ok());
    CHECK(!CorpusStore::record_from_json_line("not json").ok());
    CHECK(!CorpusStore::record_from_json_line("[1,2,3]").ok());
    CHECK(!CorpusStore::record_from_json_line("{\"record_id\":\"r1\"}").ok());
    CHECK(!CorpusStore::record_from_json_line("{\"record_id\":1}").ok());

    // A valid line with one field type corrupted.
    CorpusStore store;
    DocumentRecord r;
    r.kind = RecordKind::citation_stub;
    r.stub_linkage = StubLinkage::unlinked;
    r.title = "T";
    r.indexed_at = {2017, 3, 1};
    auto id = store.upsert_record(r).value();
    std::string line = CorpusStore::record_to_json_line(*store.get_record(id));
    auto good = CorpusStore::record_from_json_line(line);
    CHECK(good.ok());
    std::string bad = line;
    bad.replace(bad.find("\"kind\":\"citation_stub\""), 22, "\"kind\":\"nonsense!!!!!\"");
    CHECK(!CorpusStore::record_from_json_line(bad).ok());

    std::mt19937 rng(303);
    for (int trial = 0; trial < 200; ++trial) {
        std::string junk = line;
        // Flip a few bytes; parser must reject or survive, never crash.
        for (int k = 0; k < 3; ++k) {
            junk[rng() % junk.size()] = static_cast<char>(rng() % 256);
        }
        auto parsed = CorpusStore::record_from_json_line(junk);
        (void)parsed;
    }
}
