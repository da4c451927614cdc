#include <doctest.h>

#include <cmath>
#include <random>

#include "scholarlite/query.hpp"
#include "scholarlite/store.hpp"
#include "scholarlite/text.hpp"

using namespace scholarlite;

namespace {

DocumentRecord doc(const std::string& title, int year, Language lang = Language::english,
                   DocType type = DocType::article,
                   const std::string& domain = "repo.example.edu") {
    DocumentRecord r;
    r.kind = RecordKind::full;
    r.title = title;
    r.authors.push_back({"Ashford", "A.", std::nullopt});
    r.pub_year = year;
    r.language = lang;
    r.doc_type = type;
    r.source_name = "Journal of Fixtures";
    VersionRef v;
    v.url = "https://" + domain + "/p/" + title;
    v.source_domain = domain;
    v.source_type = SourceType::repository;
    v.byte_size = 1;
    r.versions.push_back(v);
    r.primary_version = 0;
    r.indexed_at = {2017, 3, 1};
    return r;
}

DocumentRecord stub(const std::string& title, int year) {
    DocumentRecord r;
    r.kind = RecordKind::citation_stub;
    r.stub_linkage = StubLinkage::unlinked;
    r.title = title;
    r.pub_year = year;
    r.indexed_at = {2017, 3, 1};
    return r;
}

}  // namespace

TEST_CASE("parse_query: absurd query shape") {
    auto q = parse_query("-site:fsdfsdsdh.info year:2009..2009");
    REQUIRE(q.ok());
    CHECK(q.value().site_exclude == std::vector<std::string>{"fsdfsdsdh.info"});
    REQUIRE(q.value().year_range.has_value());
    CHECK(q.value().year_range->first == 2009);
    CHECK(q.value().year_range->second == 2009);
    CHECK(q.value().terms.empty());
}

TEST_CASE("parse_query: site, intitle, author, source") {
    auto q = parse_query("site:harvard.edu intitle:citations author:\"Garfield\" "
                         "source:\"Science\" impact");
    REQUIRE(q.ok());
    CHECK(q.value().site_include == "harvard.edu");
    CHECK(q.value().intitle_terms == std::vector<std::string>{"citations"});
    CHECK(q.value().author_terms == std::vector<std::string>{"Garfield"});
    CHECK(q.value().source_term == "Science");
    CHECK(q.value().terms == std::vector<std::string>{"impact"});
}

TEST_CASE("parse_query: empty input matches everything") {
    auto q = parse_query("");
    REQUIRE(q.ok());
    CorpusStore store;
    store.upsert_record(doc("Anything", 2010));
    QueryEngine engine(store);
    CHECK(engine.match_set(q.value()).size() == 1);
}

TEST_CASE("parse_query: malformed year range errors with position") {
    auto q = parse_query("term year:20ab..2010");
    REQUIRE(!q.ok());
    CHECK(q.error().code == "parse-error");
    CHECK(q.error().message.find("position 5") != std::string::npos);
    CHECK(!parse_query("year:2012..2009").ok());
}

TEST_CASE("execute: site filter tests the primary version only") {
    CorpusStore store;
    DocumentRecord r = doc("Dual homed paper", 2012);
    VersionRef secondary;
    secondary.url = "https://pub.example.com/p/dual";
    secondary.source_domain = "pub.example.com";
    secondary.source_type = SourceType::publisher;
    secondary.byte_size = 1;
    r.versions.push_back(secondary);
    r.primary_version = 0;  // the repo copy stays primary
    store.upsert_record(r);
    QueryEngine engine(store);

    auto include_secondary = parse_query("site:pub.example.com").value();
    CHECK(engine.execute(include_secondary).value().hits.empty());

    auto include_primary = parse_query("site:repo.example.edu").value();
    CHECK(engine.execute(include_primary).value().hits.size() == 1);

    // -site: excludes on any version.
    auto exclude_secondary = parse_query("-site:pub.example.com").value();
    CHECK(engine.execute(exclude_secondary).value().hits.empty());
    auto exclude_elsewhere = parse_query("-site:nowhere.example.net").value();
    CHECK(engine.execute(exclude_elsewhere).value().hits.size() == 1);
}

TEST_CASE("execute: record-kind flags") {
    CorpusStore store;
    for (int i = 0; i < 3; ++i) store.upsert_record(doc("Full doc " + std::to_string(i), 2010));
    for (int i = 0; i < 2; ++i) store.upsert_record(stub("Stub " + std::to_string(i), 2010));
    QueryEngine engine(store);

    Query all;
    CHECK(engine.execute(all).value().hit_count_estimate == 5);
    Query no_stubs;
    no_stubs.include_citations = false;
    CHECK(engine.execute(no_stubs).value().hit_count_estimate == 3);

    store.upsert_record(doc("A patent document", 2010, Language::english, DocType::patent));
    Query no_patents;
    no_patents.include_patents = false;
    CHECK(engine.execute(no_patents).value().hit_count_estimate == 5);
}

TEST_CASE("execute: the 1000-result cap") {
    CorpusStore store;
    for (int i = 0; i < 1500; ++i) {
        store.upsert_record(doc("Capped doc number " + std::to_string(i), 2010));
    }
    QueryEngine engine(store);
    Query q;
    std::size_t retrievable = 0;
    int pages_with_hits = 0;
    for (int page = 0;; ++page) {
        auto result = engine.execute(q, page, 20);
        REQUIRE(result.ok());
        if (result.value().hits.empty()) break;
        retrievable += result.value().hits.size();
        ++pages_with_hits;
    }
    CHECK(retrievable == 1000);
    CHECK(pages_with_hits == 50);

    // A page past the cap is empty but keeps the estimate.
    auto beyond = engine.execute(q, 60, 20);
    REQUIRE(beyond.ok());
    CHECK(beyond.value().hits.empty());
    CHECK(beyond.value().hit_count_estimate == 1500);
}

TEST_CASE("execute: page size validation") {
    CorpusStore store;
    QueryEngine engine(store);
    CHECK(!engine.execute(Query{}, 0, 15).ok());
    CHECK(engine.execute(Query{}, 0, 10).ok());
    CHECK(engine.execute(Query{}, 0, 20).ok());
}

TEST_CASE("execute: date sort returns only current-year documents") {
    CorpusStore store(2017);
    store.upsert_record(doc("Old paper", 2012));
    DocumentRecord fresh = doc("Fresh paper", 2017);
    fresh.online_at = Date{2017, 2, 1};
    store.upsert_record(fresh);
    QueryEngine engine(store);
    Query q;
    q.sort = SortOrder::date;
    auto result = engine.execute(q).value();
    REQUIRE(result.hits.size() == 1);
    CHECK(store.get_record(result.hits[0])->title == "Fresh paper");
}

TEST_CASE("hit_count_estimate: exact and rounded noise") {
    CorpusStore store;
    for (int i = 0; i < 4; ++i) store.upsert_record(doc("Doc " + std::to_string(i), 2010));
    QueryEngine engine(store);
    CHECK(engine.hit_count_estimate(Query{}) == 4);
    CHECK(engine.hit_count_estimate(Query{}, NoiseModel::rounded(3)) == 4);

    CHECK(round_significant(1234567, 3) == 1230000);
    CHECK(round_significant(999, 3) == 999);
    CHECK(round_significant(1235000, 3) == 1240000);  // half rounds up
    CHECK(round_significant(184001450, 3) == 184000000);
}

TEST_CASE("rank_relevance: citations dominate on equal text score") {
    CorpusStore store;
    auto lo = store.upsert_record(doc("Equal text score paper one", 2010)).value();
    auto hi = store.upsert_record(doc("Equal text score paper two", 2010)).value();
    std::vector<RecordId> citers;
    for (int i = 0; i < 100; ++i) {
        citers.push_back(
            store.upsert_record(doc("Citer " + std::to_string(i), 2012)).value());
    }
    for (int i = 0; i < 100; ++i) store.add_citation(citers[static_cast<std::size_t>(i)], hi);
    for (int i = 0; i < 2; ++i) store.add_citation(citers[static_cast<std::size_t>(i)], lo);

    QueryEngine engine(store);
    Query q;  // no terms: text scores all zero
    auto ranked = engine.rank_relevance({lo, hi}, q);
    REQUIRE(ranked.size() == 2);
    CHECK(ranked[0] == hi);

    CHECK(engine.rank_relevance({lo}, q) == std::vector<RecordId>{lo});
}

TEST_CASE("rank_relevance: full ordering equals an independent recompute") {
    CorpusStore store(2017);
    std::mt19937 rng(11);
    std::vector<RecordId> ids;
    const char* words[] = {"percolation", "lattices", "networks", "entropy"};
    for (int i = 0; i < 10; ++i) {
        DocumentRecord r = doc("Paper " + std::to_string(i) + " about " +
                                   words[static_cast<std::size_t>(i % 4)],
                               2010, i % 2 ? Language::english : Language::german);
        r.abstract = std::string("This work treats ") + words[static_cast<std::size_t>((i + 1) % 4)] +
                     " at length.";
        ids.push_back(store.upsert_record(r).value());
    }
    for (int e = 0; e < 30; ++e) {
        const auto a = ids[rng() % ids.size()];
        const auto b = ids[rng() % ids.size()];
        if (a != b) store.add_citation(a, b);
    }
    RelevanceWeights weights{1.0, 0.5};
    QueryEngine engine(store, weights);
    Query q = parse_query("percolation").value();
    q.languages.insert(Language::english);
    // The language filter would drop docs; rank over the unfiltered set to
    // exercise the beta term.
    auto ranked = engine.rank_relevance(ids, q);

    // Independent recompute of the documented formula.
    auto tokens_of = [](const DocumentRecord& r) {
        auto t = tokenize(r.title);
        if (r.abstract) {
            auto a = tokenize(*r.abstract);
            t.insert(t.end(), a.begin(), a.end());
        }
        return t;
    };
    std::vector<std::pair<double, RecordId>> expected;
    for (const auto& id : ids) {
        auto r = store.get_record(id);
        auto title_tokens = tokenize(r->title);
        auto abs_tokens = r->abstract ? tokenize(*r->abstract) : std::vector<std::string>{};
        double tf = 2.0 * static_cast<double>(std::count(title_tokens.begin(), title_tokens.end(),
                                                         "percolation")) +
                    static_cast<double>(std::count(abs_tokens.begin(), abs_tokens.end(),
                                                   "percolation"));
        double score = tf > 0 ? 1.0 + std::log(1.0 + tf) : 0.0;
        score += 1.0 * std::log(1.0 + static_cast<double>(r->cited_by.size()));
        if (r->language == Language::english) score += 0.5;
        expected.emplace_back(score, id);
        (void)tokens_of;
    }
    std::sort(expected.begin(), expected.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        const auto ca = store.get_record(a.second)->cited_by.size();
        const auto cb = store.get_record(b.second)->cited_by.size();
        if (ca != cb) return ca > cb;
        return a.second < b.second;
    });
    for (std::size_t i = 0; i < ids.size(); ++i) {
        CHECK(ranked[i] == expected[i].second);
    }
}

TEST_CASE("filter soundness and term monotonicity on random queries") {
    CorpusStore store;
    std::mt19937 rng(23);
    const char* vocab[] = {"alpha", "beta", "gamma", "delta", "epsilon"};
    for (int i = 0; i < 300; ++i) {
        std::string title = "Doc";
        for (int w = 0; w < 3; ++w) title += std::string(" ") + vocab[rng() % 5];
        DocumentRecord r = doc(title, 2000 + static_cast<int>(rng() % 17),
                               rng() % 2 ? Language::english : Language::french,
                               rng() % 10 == 0 ? DocType::patent : DocType::article);
        store.upsert_record(r);
        if (rng() % 5 == 0) store.upsert_record(stub(title + " stub", 2010));
    }
    QueryEngine engine(store);

    for (int trial = 0; trial < 50; ++trial) {
        Query q;
        if (rng() % 2) q.terms.push_back(vocab[rng() % 5]);
        if (rng() % 3 == 0) q.terms.push_back(vocab[rng() % 5]);
        if (rng() % 2) {
            const int lo = 2000 + static_cast<int>(rng() % 17);
            q.year_range = {lo, lo + static_cast<int>(rng() % 5)};
        }
        if (rng() % 3 == 0) q.languages.insert(Language::english);
        q.include_citations = rng() % 2 == 0;
        q.include_patents = rng() % 2 == 0;

        const auto matches = engine.match_set(q);
        // Soundness: every returned id satisfies an independently evaluated
        // predicate.
        for (const auto& id : matches) {
            auto r = store.get_record(id);
            REQUIRE(r.has_value());
            if (!q.include_citations) CHECK(r->kind != RecordKind::citation_stub);
            if (!q.include_patents) CHECK(r->doc_type != DocType::patent);
            if (q.year_range) {
                REQUIRE(r->pub_year.has_value());
                CHECK(*r->pub_year >= q.year_range->first);
                CHECK(*r->pub_year <= q.year_range->second);
            }
            if (!q.languages.empty()) CHECK(q.languages.count(r->language) == 1);
            for (const auto& term : q.terms) {
                auto tokens = tokenize(r->title);
                if (r->abstract) {
                    auto abs_tokens = tokenize(*r->abstract);
                    tokens.insert(tokens.end(), abs_tokens.begin(), abs_tokens.end());
                }
                auto src = tokenize(r->source_name);
                tokens.insert(tokens.end(), src.begin(), src.end());
                CHECK(std::find(tokens.begin(), tokens.end(), normalize_text(term)) !=
                      tokens.end());
            }
        }
        // Monotonicity: one more term never increases the count.
        Query narrowed = q;
        narrowed.terms.push_back(vocab[rng() % 5]);
        CHECK(engine.match_set(narrowed).size() <= matches.size());
    }
}

TEST_CASE("export: author truncation, batch limit, no abstract") {
    CorpusStore store;
    DocumentRecord r = doc("Exported paper", 2015);
    r.authors.clear();
    for (int i = 0; i < 12; ++i) {
        r.authors.push_back({"Surname" + std::to_string(i), "A.", std::nullopt});
    }
    r.abstract = "UNIQUE_SENTINEL_ABSTRACT_TEXT";
    auto id = store.upsert_record(r).value();

    for (auto format : {ExportFormat::bibtex, ExportFormat::endnote, ExportFormat::refman,
                        ExportFormat::refworks}) {
        auto bytes = export_records({id}, format, store);
        REQUIRE(bytes.ok());
        CHECK(bytes.value().find("Surname9") != std::string::npos);
        CHECK(bytes.value().find("Surname10") == std::string::npos);  // 10-author cap
        CHECK(bytes.value().find("UNIQUE_SENTINEL") == std::string::npos);
    }

    std::vector<RecordId> too_many(21, id);
    auto blocked = export_records(too_many, ExportFormat::bibtex, store);
    REQUIRE(!blocked.ok());
    CHECK(blocked.error().code == "batch-limit");

    auto empty = export_records({}, ExportFormat::bibtex, store);
    REQUIRE(empty.ok());
    CHECK(empty.value().empty());

    // Determinism: same input, same bytes.
    auto once = export_records({id}, ExportFormat::refman, store);
    auto twice = export_records({id}, ExportFormat::refman, store);
    CHECK(once.value() == twice.value());
}

TEST_CASE("parse_query survives arbitrary input") {
    std::mt19937 rng(202);
    for (int trial = 0; trial < 500; ++trial) {
        std::string junk;
        const auto len = rng() % 80;
        for (std::size_t i = 0; i < len; ++i) {
            junk.push_back(static_cast<char>(1 + rng() % 255));
        }
        auto parsed = parse_query(junk);  // ok or parse-error, never a crash
        if (!parsed.ok()) CHECK(parsed.error().code == "parse-error");
    }
    CHECK(parse_query("site: -site: intitle: author: source:").ok());
    CHECK(!parse_query("year:..").ok());
    CHECK(!parse_query("year:1e9..2000").ok());
}
