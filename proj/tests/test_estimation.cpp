#include <doctest.h>

#include <cmath>
#include <random>

#include "scholarlite/estimation.hpp"
#include "scholarlite/query.hpp"
#include "scholarlite/store.hpp"

using namespace scholarlite;

namespace {

DocumentRecord doc(const std::string& title, std::optional<int> year,
                   Language lang = Language::english, DocType type = DocType::article,
                   const std::string& domain = "repo.example.edu") {
    DocumentRecord r;
    r.kind = RecordKind::full;
    r.title = title;
    r.pub_year = year;
    r.language = lang;
    r.doc_type = type;
    VersionRef v;
    v.url = "https://" + domain + "/p/" + title;
    v.source_domain = domain;
    v.byte_size = 1;
    r.versions.push_back(v);
    r.primary_version = 0;
    r.indexed_at = {2017, 3, 1};
    return r;
}

}  // namespace

TEST_CASE("estimate_absurd: exact noise on a fixture, yearless docs diagnosed") {
    CorpusStore store;
    for (int i = 0; i < 6; ++i) store.upsert_record(doc("Y doc " + std::to_string(i), 2009 + i % 2));
    store.upsert_record(doc("No year doc", std::nullopt));
    QueryEngine engine(store);

    auto est = estimate_absurd(engine, {2009, 2010});
    CHECK(est.method == EstimationMethod::absurd_query);
    CHECK(est.value == 6);
    REQUIRE(est.per_bucket.has_value());
    CHECK(est.per_bucket->at("2009") == 3);
    CHECK(est.per_bucket->at("2010") == 3);
    REQUIRE(!est.diagnostics.empty());
    CHECK(est.diagnostics[0].find("1 documents lack") != std::string::npos);

    auto single = estimate_absurd(engine, {2009, 2009});
    CHECK(single.per_bucket->size() == 1);
}

TEST_CASE("estimate_year_query matches estimate_absurd on a clean corpus") {
    CorpusStore store;
    for (int i = 0; i < 8; ++i) store.upsert_record(doc("D" + std::to_string(i), 2000 + i % 4));
    QueryEngine engine(store);
    auto absurd = estimate_absurd(engine, {2000, 2003});
    auto plain = estimate_year_query(engine, {2000, 2003});
    CHECK(absurd.value == plain.value);
    CHECK(*absurd.per_bucket == *plain.per_bucket);
}

TEST_CASE("estimate_domain_sum: primary-only semantics and duplicate rejection") {
    CorpusStore store;
    store.upsert_record(doc("On org", 2010, Language::english, DocType::article, "a.example.org"));
    DocumentRecord dual = doc("Primary org secondary edu", 2011, Language::english,
                              DocType::article, "b.example.org");
    VersionRef extra;
    extra.url = "https://c.example.edu/p/x";
    extra.source_domain = "c.example.edu";
    extra.byte_size = 1;
    dual.versions.push_back(extra);
    dual.primary_version = 0;
    store.upsert_record(dual);
    QueryEngine engine(store);

    auto edu_only = estimate_domain_sum(engine, {"edu"});
    REQUIRE(edu_only.ok());
    CHECK(edu_only.value().value == 0);  // secondary version does not count

    auto both = estimate_domain_sum(engine, {"org", "edu"});
    REQUIRE(both.ok());
    CHECK(both.value().value == 2);
    CHECK(both.value().per_bucket->at("org") == 2);
    CHECK(both.value().per_bucket->at("edu") == 0);
    REQUIRE(!both.value().diagnostics.empty());

    auto dup = estimate_domain_sum(engine, {"org", "ORG"});
    REQUIRE(!dup.ok());
    CHECK(dup.error().code == "duplicate-tld");

    CorpusStore empty_store;
    QueryEngine empty_engine(empty_store);
    CHECK(estimate_domain_sum(empty_engine, {"org"}).value().value == 0);
}

TEST_CASE("capture/recapture: closed forms and error paths") {
    std::set<RecordId> a, b;
    for (int i = 0; i < 50; ++i) a.insert("r" + std::to_string(i));
    for (int i = 30; i < 70; ++i) b.insert("r" + std::to_string(i));  // overlap 20
    auto est = estimate_capture_recapture(a, b);
    REQUIRE(est.ok());
    CHECK(est.value().value == 100);  // 50*40/20

    std::set<RecordId> same;
    for (int i = 0; i < 10; ++i) same.insert("r" + std::to_string(i));
    CHECK(estimate_capture_recapture(same, same).value().value == 10);

    std::set<RecordId> disjoint{"x1", "x2"};
    auto none = estimate_capture_recapture(a, disjoint);
    REQUIRE(!none.ok());
    CHECK(none.error().code == "no-overlap");

    CHECK(!estimate_capture_recapture({}, a).ok());

    CaptureRecaptureOptions chapman;
    chapman.chapman_correction = true;
    // Chapman: (51*41)/21 - 1 = 98.57 -> 99
    CHECK(estimate_capture_recapture(a, b, chapman).value().value == 99);
}

TEST_CASE("capture/recapture is unbiased in expectation on uniform samples") {
    const int population = 2000;
    const int sample_size = 400;
    double sum = 0;
    int trials = 0;
    for (int seed = 1; seed <= 60; ++seed) {
        std::mt19937 rng(static_cast<unsigned>(seed));
        std::vector<int> ids(population);
        for (int i = 0; i < population; ++i) ids[static_cast<std::size_t>(i)] = i;
        auto draw = [&] {
            std::vector<int> pool = ids;
            std::set<RecordId> out;
            for (int k = 0; k < sample_size; ++k) {
                const auto idx = rng() % pool.size();
                out.insert("r" + std::to_string(pool[idx]));
                pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
            }
            return out;
        };
        auto est = estimate_capture_recapture(draw(), draw());
        if (est.ok()) {
            sum += static_cast<double>(est.value().value);
            ++trials;
        }
    }
    REQUIRE(trials > 0);
    const double mean = sum / trials;
    CHECK(std::abs(mean - population) / population < 0.05);
}

TEST_CASE("estimate_language_proportion: arithmetic and errors") {
    CorpusStore store;
    for (int i = 0; i < 65; ++i) store.upsert_record(doc("En " + std::to_string(i), 2010));
    for (int i = 0; i < 35; ++i) {
        store.upsert_record(doc("Fr " + std::to_string(i), 2010, Language::french));
    }
    QueryEngine engine(store);

    auto est = estimate_language_proportion(engine, Language::english, 0.65);
    REQUIRE(est.ok());
    CHECK(est.value().value == 100);

    CHECK(estimate_language_proportion(engine, Language::english, 1.0).value().value == 65);

    auto zero = estimate_language_proportion(engine, Language::korean, 0.5);
    REQUIRE(!zero.ok());
    CHECK(zero.error().code == "zero-language-count");

    CHECK(!estimate_language_proportion(engine, Language::english, 0.0).ok());
}

TEST_CASE("method_correlation: identity, scaling, constants") {
    auto series = [](std::initializer_list<std::int64_t> values) {
        SizeEstimate e;
        e.method = EstimationMethod::year_query;
        e.per_bucket.emplace();
        int year = 2000;
        for (auto v : values) (*e.per_bucket)[std::to_string(year++)] = v;
        e.value = 0;
        return e;
    };
    auto a = series({10, 20, 30, 40});
    auto b = series({20, 40, 60, 80});
    auto matrix = method_correlation({a, b}).value();
    CHECK(matrix.values[0][1] == doctest::Approx(1.0));
    CHECK(matrix.values[0][0] == 1.0);
    CHECK(matrix.values[1][0] == matrix.values[0][1]);

    auto identical = method_correlation({a, a}).value();
    CHECK(identical.values[0][1] == doctest::Approx(1.0));

    auto flat = series({5, 5, 5, 5});
    auto degenerate = method_correlation({a, flat}).value();
    CHECK(std::isnan(degenerate.values[0][1]));
    REQUIRE(!degenerate.diagnostics.empty());

    CHECK(!method_correlation({a}).ok());
}

TEST_CASE("indexing_speed: dates and age-derived rows") {
    CHECK(indexing_speed({2017, 1, 27}, {2017, 3, 24}).value() == 56);
    CHECK(indexing_speed({2017, 3, 24}, {2017, 3, 24}).value() == 0);
    auto negative = indexing_speed({2017, 3, 24}, {2017, 3, 20});
    REQUIRE(!negative.ok());
    CHECK(negative.error().code == "negative-speed");

    CHECK(indexing_speed_from_ages(58, 56).value().days == 2);
    CHECK(indexing_speed_from_ages(33, 31).value().days == 2);
    CHECK(indexing_speed_from_ages(27, 26).value().days == 1);
    CHECK(indexing_speed_from_ages(6, 3).value().days == 3);
    CHECK(indexing_speed_from_ages(5, 5).value().days == 0);
    CHECK(indexing_speed_from_ages(58, 56).value().margin_note.find("2 day") !=
          std::string::npos);
    CHECK(!indexing_speed_from_ages(3, 6).ok());
}

TEST_CASE("citation_ratio: reported to two decimals, scale covariant") {
    std::vector<ComparisonRow> rows = {{"a", 42600000, 27600000}};
    CHECK(citation_ratio(rows).value() == doctest::Approx(1.54));
    rows = {{"a", 80800000, 44900000}};
    CHECK(citation_ratio(rows).value() == doctest::Approx(1.80));
    rows = {{"a", 5, 5}, {"b", 10, 10}};
    CHECK(citation_ratio(rows).value() == doctest::Approx(1.00));

    auto zero = citation_ratio({{"a", 3, 0}});
    REQUIRE(!zero.ok());
    CHECK(zero.error().code == "zero-denominator");

    // Scaling column A by k scales the ratio by k.
    std::vector<ComparisonRow> base = {{"a", 7, 3}, {"b", 2, 5}};
    std::vector<ComparisonRow> scaled = {{"a", 21, 3}, {"b", 6, 5}};
    CHECK(citation_ratio(scaled).value() ==
          doctest::Approx(3.0 * citation_ratio(base).value()).epsilon(0.01));
}

TEST_CASE("spearman: fixtures and tie handling") {
    std::vector<ComparisonRow> same = {{"a", 1, 10}, {"b", 2, 20}, {"c", 3, 30}};
    CHECK(spearman(same).value() == doctest::Approx(1.0));

    std::vector<ComparisonRow> reversed = {{"a", 1, 30}, {"b", 2, 20}, {"c", 3, 10}};
    CHECK(spearman(reversed).value() == doctest::Approx(-1.0));

    std::vector<ComparisonRow> mixed = {{"a", 1, 2}, {"b", 2, 1}, {"c", 3, 3}};
    CHECK(spearman(mixed).value() == doctest::Approx(0.5));

    // Hand-computed with average ranks: a=[1,2,2,3] -> [1,2.5,2.5,4].
    std::vector<ComparisonRow> ties = {{"a", 1, 1}, {"b", 2, 3}, {"c", 2, 2}, {"d", 3, 4}};
    CHECK(spearman(ties).value() == doctest::Approx(std::sqrt(0.9)));

    std::vector<ComparisonRow> flat = {{"a", 2, 1}, {"b", 2, 5}};
    auto degenerate = spearman(flat);
    REQUIRE(!degenerate.ok());
    CHECK(degenerate.error().code == "constant-column");

    CHECK(!spearman({{"a", 1, 1}}).ok());
}

TEST_CASE("spearman is invariant under strictly monotone transforms") {
    std::mt19937 rng(17);
    std::vector<ComparisonRow> rows;
    for (int i = 0; i < 30; ++i) {
        rows.push_back({"r" + std::to_string(i), static_cast<std::int64_t>(rng() % 1000),
                        static_cast<std::int64_t>(rng() % 1000)});
    }
    const double base = spearman(rows).value();
    std::vector<ComparisonRow> transformed = rows;
    for (auto& r : transformed) {
        r.citations_a = r.citations_a * r.citations_a;  // strictly monotone on non-negatives
        r.citations_b = 3 * r.citations_b + 7;
    }
    CHECK(spearman(transformed).value() == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("average_ranks: ties share the mean of their positions") {
    auto ranks = average_ranks({10.0, 20.0, 20.0, 30.0});
    REQUIRE(ranks.size() == 4);
    CHECK(ranks[0] == 1.0);
    CHECK(ranks[1] == 2.5);
    CHECK(ranks[2] == 2.5);
    CHECK(ranks[3] == 4.0);
}

TEST_CASE("language distribution from printed counts") {
    const std::vector<std::pair<std::string, std::int64_t>> counts = {
        {"English", 90932140},  {"Chinese", 61545203}, {"Japanese", 6327073},
        {"German", 4326244},    {"Spanish", 4144354},  {"French", 3657705},
        {"Portuguese", 2403898}, {"Korean", 2131744},  {"Italian", 999134},
        {"Polish", 766266},     {"Dutch", 475703},     {"Turkish", 472830},
        {"Other", 4534156},
    };
    auto dist = language_distribution_from_counts(counts);
    CHECK(dist.total == 182716450);
    const double printed[] = {49.76, 33.70, 3.46, 2.37, 2.27, 2.00, 1.32,
                              1.17,  0.55,  0.42, 0.26, 0.26, 2.48};
    for (std::size_t i = 0; i < dist.rows.size(); ++i) {
        CHECK(std::abs(dist.rows[i].percent - printed[i]) <= 0.05);
    }
    CHECK(dist.to_csv().find("language,documents,percent") == 0);
}

TEST_CASE("language distribution over an engine") {
    CorpusStore store;
    for (int i = 0; i < 7; ++i) store.upsert_record(doc("En " + std::to_string(i), 2010));
    for (int i = 0; i < 3; ++i) {
        store.upsert_record(doc("De " + std::to_string(i), 2010, Language::german));
    }
    QueryEngine engine(store);
    auto dist = language_distribution(engine, {2010, 2010});
    CHECK(dist.total == 10);
    for (const auto& row : dist.rows) {
        if (row.label == "english") CHECK(row.percent == doctest::Approx(70.0));
        if (row.label == "german") CHECK(row.percent == doctest::Approx(30.0));
    }

    CorpusStore solo;
    solo.upsert_record(doc("Only one", 2010));
    QueryEngine solo_engine(solo);
    auto full = language_distribution(solo_engine, {2010, 2010});
    for (const auto& row : full.rows) {
        if (row.label == "english") CHECK(row.percent == doctest::Approx(100.0));
    }
}

TEST_CASE("doc_type_distribution counts unknown as its own row") {
    std::vector<DocumentRecord> sample;
    sample.push_back(doc("A1", 2010, Language::english, DocType::article));
    sample.push_back(doc("A2", 2010, Language::english, DocType::article));
    sample.push_back(doc("U1", 2010, Language::english, DocType::unknown));
    auto table = doc_type_distribution(sample);
    CHECK(table[DocType::article] == 2);
    CHECK(table[DocType::unknown] == 1);
    CHECK(table[DocType::thesis] == 0);

    CHECK(doc_type_distribution({})[DocType::article] == 0);
}

TEST_CASE("size report sums components and flags the published discrepancy") {
    auto report = make_size_report(
        {{"sources", 184001450}, {"cited_references", 134160570}, {"patents", 13742920}},
        330804940);
    CHECK(report.total == 331904940);
    REQUIRE(!report.diagnostics.empty());
    CHECK(report.diagnostics[0].find("330804940") != std::string::npos);
    CHECK(report.diagnostics[0].find("331904940") != std::string::npos);

    auto agreeing = make_size_report({{"a", 5}, {"b", 7}}, 12);
    CHECK(agreeing.total == 12);
    CHECK(agreeing.diagnostics.empty());

    auto unchecked = make_size_report({{"a", 5}});
    CHECK(unchecked.total == 5);
    CHECK(unchecked.diagnostics.empty());
}

TEST_CASE("exact vs rounded(3) per-year series stay highly correlated") {
    CorpusStore store;
    std::mt19937 rng(31);
    for (int y = 1990; y <= 2016; ++y) {
        const int docs_this_year = 50 + static_cast<int>(rng() % 2000);
        for (int i = 0; i < docs_this_year; ++i) {
            DocumentRecord r;
            r.kind = RecordKind::full;
            r.title = "Bulk " + std::to_string(y) + "-" + std::to_string(i);
            r.pub_year = y;
            VersionRef v;
            v.url = r.title;
            v.source_domain = "bulk.example.org";
            r.versions.push_back(v);
            r.primary_version = 0;
            r.indexed_at = {2017, 3, 1};
            REQUIRE(store.upsert_record(r).ok());
        }
    }
    QueryEngine exact_engine(store, {}, NoiseModel::exact());
    QueryEngine rounded_engine(store, {}, NoiseModel::rounded(3));
    auto exact_series = estimate_absurd(exact_engine, {1990, 2016});
    auto rounded_series = estimate_absurd(rounded_engine, {1990, 2016});
    auto matrix = method_correlation({exact_series, rounded_series}).value();
    CHECK(matrix.values[0][1] >= 0.97);
}
