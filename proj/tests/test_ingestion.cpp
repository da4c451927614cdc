#include <doctest.h>

#include "scholarlite/citation.hpp"
#include "scholarlite/ingest.hpp"
#include "scholarlite/snapshot_io.hpp"
#include "scholarlite/store.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace scholarlite;

namespace {

MetaTag tag(MetaScheme scheme, const char* key, const std::string& value) {
    return {scheme, key, value};
}

StructuredText scholarly_body(const std::string& title, const std::string& authors,
                              int n_refs = 3) {
    StructuredText text;
    text.blocks.push_back({title, 20.0, 1});
    text.blocks.push_back({authors, 14.0, 1});
    text.blocks.push_back({"Abstract of the work.", 10.0, 1});
    text.blocks.push_back({"Body paragraph one.", 10.0, 1});
    text.blocks.push_back({"Body paragraph two.", 10.0, 2});
    if (n_refs > 0) {
        text.blocks.push_back({"References", 12.0, 3});
        for (int i = 1; i <= n_refs; ++i) {
            text.blocks.push_back({"[" + std::to_string(i) + "] Someone, A. (200" +
                                       std::to_string(i) + "). Cited work number " +
                                       std::to_string(i) + ".",
                                   10.0, 3});
        }
    }
    return text;
}

RawDocument plain_doc(const std::string& url) {
    RawDocument d;
    d.url = url;
    d.body = scholarly_body("A title", "A. Author", 0);
    d.byte_size = 10000;
    d.file_kind = FileKind::html;
    d.abstract_visible = true;
    return d;
}

SourceSnapshot snapshot(const std::string& domain, bool whitelisted, Date date = {2017, 3, 1}) {
    SourceSnapshot s;
    s.domain = domain;
    s.tld = tld_of(domain);
    s.location_whitelisted = whitelisted;
    s.source_type = whitelisted ? SourceType::repository : SourceType::university;
    s.snapshot_date = date;
    return s;
}

}  // namespace

TEST_CASE("meta tags: highwire beats dublin core") {
    RawDocument d = plain_doc("https://x.example.edu/a");
    d.meta_tags = {
        tag(MetaScheme::dublin_core, "dc.title", "DC title"),
        tag(MetaScheme::highwire, "citation_title", "Highwire title"),
        tag(MetaScheme::highwire, "citation_author", "Garfield, E."),
        tag(MetaScheme::highwire, "citation_publication_date", "1964-07-01"),
        tag(MetaScheme::highwire, "citation_journal_title", "Science"),
    };
    auto meta = parse_meta_tags(d);
    REQUIRE(meta.has_value());
    CHECK(meta->title == "Highwire title");
    CHECK(meta->pub_year == 1964);
    CHECK(meta->source_name == "Science");
    CHECK(meta->doc_type == DocType::article);
    CHECK_FALSE(meta->incomplete_source_fields);
    REQUIRE(meta->authors.size() == 1);
    CHECK(meta->authors[0].surname == "Garfield");
    CHECK(meta->authors[0].given_initials == "E.");
}

TEST_CASE("meta tags: no tags means none") {
    RawDocument d = plain_doc("https://x.example.edu/a");
    CHECK(!parse_meta_tags(d).has_value());
}

TEST_CASE("meta tags: dublin core is flagged as last resort") {
    RawDocument d = plain_doc("https://x.example.edu/a");
    d.meta_tags = {
        tag(MetaScheme::dublin_core, "dc.title", "Only DC"),
        tag(MetaScheme::dublin_core, "dc.creator", "Ortega, J.L."),
        tag(MetaScheme::dublin_core, "dc.date", "2014"),
        tag(MetaScheme::dublin_core, "dc.type", "article"),
    };
    auto meta = parse_meta_tags(d);
    REQUIRE(meta.has_value());
    CHECK(meta->incomplete_source_fields);
    CHECK(meta->source_name.empty());  // no journal field in this scheme
    CHECK(meta->pub_year == 2014);
}

TEST_CASE("meta tags: malformed tag is skipped and reported") {
    RawDocument d = plain_doc("https://x.example.edu/a");
    d.meta_tags = {
        tag(MetaScheme::highwire, "citation_title", ""),  // missing value
        tag(MetaScheme::eprints, "eprints.title", "Fallback title"),
    };
    std::vector<std::string> diagnostics;
    auto meta = parse_meta_tags(d, &diagnostics);
    REQUIRE(meta.has_value());
    CHECK(meta->title == "Fallback title");
    REQUIRE(!diagnostics.empty());
    CHECK(diagnostics[0].find("citation_title") != std::string::npos);
}

TEST_CASE("layout: fixture title, authors, abstract") {
    StructuredText text;
    text.blocks.push_back({"T", 20.0, 1});
    text.blocks.push_back({"A, B", 14.0, 1});
    text.blocks.push_back({"abs…", 10.0, 1});
    auto res = parse_fulltext_layout(text);
    REQUIRE(res.ok());
    REQUIRE(res.value().has_value());
    const BibMetadata& meta = *res.value();
    CHECK(meta.title == "T");
    REQUIRE(meta.authors.size() == 2);
    CHECK(meta.authors[0].surname == "A");
    CHECK(meta.authors[1].surname == "B");
    REQUIRE(meta.abstract.has_value());
    CHECK(*meta.abstract == "abs…");
}

TEST_CASE("layout: first block must carry the largest font") {
    StructuredText text;
    text.blocks.push_back({"Not the title", 12.0, 1});
    text.blocks.push_back({"LOUD SECTION HEADING", 22.0, 1});
    text.blocks.push_back({"body", 10.0, 1});
    auto res = parse_fulltext_layout(text);
    REQUIRE(res.ok());
    CHECK(!res.value().has_value());
}

TEST_CASE("layout: unsearchable text errors image-only") {
    StructuredText text;
    text.searchable = false;
    text.blocks.push_back({"T", 20.0, 1});
    auto res = parse_fulltext_layout(text);
    REQUIRE(!res.ok());
    CHECK(res.error().code == "image-only");
}

TEST_CASE("references: numbered entries after the heading") {
    auto text = scholarly_body("T", "A. Author", 3);
    auto refs = extract_references(text);
    REQUIRE(refs.size() == 3);
    CHECK(refs[0].find("[1]") == 0);
    CHECK(refs[2].find("Cited work number 3") != std::string::npos);
}

TEST_CASE("references: no section means empty") {
    auto text = scholarly_body("T", "A. Author", 0);
    CHECK(extract_references(text).empty());
}

TEST_CASE("references: Bibliography heading accepted, last heading wins") {
    StructuredText text;
    text.blocks.push_back({"T", 20.0, 1});
    text.blocks.push_back({"References", 12.0, 1});
    text.blocks.push_back({"mid-article reference list mention", 10.0, 1});
    text.blocks.push_back({"Bibliography", 12.0, 2});
    text.blocks.push_back({"Garfield, E. (1964). Science Citation Index.", 10.0, 2});
    text.blocks.push_back({"Ortega, J.L. (2014). Academic search engines.", 10.0, 2});
    auto refs = extract_references(text);
    REQUIRE(refs.size() == 2);  // unnumbered: one entry per block
    CHECK(refs[0].find("Garfield") != std::string::npos);
}

TEST_CASE("compliance: oversize stays findable but loses its full text") {
    RawDocument d = plain_doc("https://x.example.edu/big.html");
    d.byte_size = 6 * 1024 * 1024;
    auto report = check_compliance(d);
    CHECK(report.indexable);
    CHECK_FALSE(report.fulltext_indexed);
    CHECK(report.has(ComplianceViolation::oversize));
}

TEST_CASE("compliance: 5MB boundary is exact") {
    RawDocument d = plain_doc("https://x.example.edu/边界.html");
    d.byte_size = 5 * 1024 * 1024;
    CHECK_FALSE(check_compliance(d).has(ComplianceViolation::oversize));
    d.byte_size = 5 * 1024 * 1024 + 1;
    CHECK(check_compliance(d).has(ComplianceViolation::oversize));
}

TEST_CASE("compliance: clean pdf has no violations") {
    RawDocument d = plain_doc("https://x.example.edu/paper.pdf");
    d.file_kind = FileKind::pdf;
    d.byte_size = 1024 * 1024;
    d.meta_tags = {
        tag(MetaScheme::highwire, "citation_title", "T"),
        tag(MetaScheme::highwire, "citation_author", "A. Author"),
        tag(MetaScheme::highwire, "citation_publication_date", "2016-01-01"),
    };
    auto report = check_compliance(d);
    CHECK(report.indexable);
    CHECK(report.fulltext_indexed);
    CHECK(report.violations.empty());
}

TEST_CASE("compliance: pdf url must end in .pdf") {
    RawDocument d = plain_doc("https://x.example.edu/view?id=7");
    d.file_kind = FileKind::pdf;
    auto report = check_compliance(d);
    CHECK_FALSE(report.indexable);
    CHECK(report.has(ComplianceViolation::bad_pdf_extension));
}

TEST_CASE("compliance: scanned pdf loses full text") {
    RawDocument d = plain_doc("https://x.example.edu/scan.pdf");
    d.file_kind = FileKind::pdf;
    d.body.searchable = false;
    auto report = check_compliance(d);
    CHECK(report.indexable);
    CHECK_FALSE(report.fulltext_indexed);
    CHECK(report.has(ComplianceViolation::unsearchable_pdf));
}

TEST_CASE("compliance: hidden abstract blocks indexing") {
    RawDocument d = plain_doc("https://x.example.edu/closed.html");
    d.abstract_visible = false;
    auto report = check_compliance(d);
    CHECK_FALSE(report.indexable);
    CHECK(report.has(ComplianceViolation::abstract_hidden));
}

TEST_CASE("compliance: indexable=false implies violations non-empty") {
    for (const char* url : {"https://x.example.edu/view?id=7", "https://x.example.edu/h.html"}) {
        RawDocument d = plain_doc(url);
        d.file_kind = url[std::string(url).size() - 1] == '7' ? FileKind::pdf : FileKind::html;
        d.abstract_visible = false;
        auto report = check_compliance(d);
        if (!report.indexable) CHECK(!report.violations.empty());
    }
}

TEST_CASE("compliance monotonicity: fixing a violation never flips indexable off") {
    RawDocument d = plain_doc("https://x.example.edu/view?id=7");
    d.file_kind = FileKind::pdf;
    d.abstract_visible = false;
    d.body.searchable = false;
    auto before = check_compliance(d);
    CHECK_FALSE(before.indexable);

    RawDocument fixed_url = d;
    fixed_url.url = "https://x.example.edu/ok.pdf";
    RawDocument fixed_abstract = fixed_url;
    fixed_abstract.abstract_visible = true;
    RawDocument fixed_all = fixed_abstract;
    fixed_all.body.searchable = true;

    CHECK_FALSE(check_compliance(fixed_url).indexable);   // abstract still hidden
    CHECK(check_compliance(fixed_abstract).indexable);
    CHECK(check_compliance(fixed_all).indexable);
    CHECK(check_compliance(fixed_all).fulltext_indexed);
}

TEST_CASE("classify: whitelisted location wins regardless of content") {
    auto source = snapshot("repo.university.edu", true);
    RawDocument d = plain_doc("https://repo.university.edu/junk");
    d.body.blocks.clear();  // nothing scholarly about it
    auto result = classify_academic(d, source);
    CHECK(result.decision == AcademicDecision::academic);
    CHECK(result.route == ClassifyRoute::location);
}

TEST_CASE("classify: parser route needs layout plus references, or meta tags") {
    auto source = snapshot("www.university.edu", false);

    RawDocument with_refs = plain_doc("https://www.university.edu/paper");
    with_refs.body = scholarly_body("A proper paper", "A. Author", 2);
    auto r1 = classify_academic(with_refs, source);
    CHECK(r1.decision == AcademicDecision::academic);
    CHECK(r1.route == ClassifyRoute::parser);

    RawDocument bare = plain_doc("https://www.university.edu/page");
    bare.body = scholarly_body("A page", "A. Author", 0);
    auto r2 = classify_academic(bare, source);
    CHECK(r2.decision == AcademicDecision::non_academic);

    RawDocument meta_only = bare;
    meta_only.url = "https://www.university.edu/meta";
    meta_only.meta_tags = {tag(MetaScheme::highwire, "citation_title", "Tagged")};
    auto r3 = classify_academic(meta_only, source);
    CHECK(r3.decision == AcademicDecision::academic);
    CHECK(r3.route == ClassifyRoute::parser);
}

TEST_CASE("ingest: first snapshot adds, vanished docs are removed with retraction") {
    CorpusStore store;
    auto source = snapshot("repo.uni.edu", true);
    for (int i = 0; i < 5; ++i) {
        RawDocument d = plain_doc("https://repo.uni.edu/p" + std::to_string(i));
        d.meta_tags = {
            tag(MetaScheme::highwire, "citation_title", "Paper number " + std::to_string(i)),
            tag(MetaScheme::highwire, "citation_author", "Writer, W."),
            tag(MetaScheme::highwire, "citation_publication_date", "2015-01-01"),
        };
        source.documents.push_back(d);
    }
    // Doc 0 cites doc 1 through its reference list.
    source.documents[0].body =
        scholarly_body("Paper number 0", "W. Writer", 0);
    source.documents[0].body.blocks.push_back({"References", 12.0, 3});
    source.documents[0].body.blocks.push_back(
        {"[1] Writer, W. (2015). Paper number 1.", 10.0, 3});

    auto report = ingest_snapshot(source, store);
    REQUIRE(report.ok());
    CHECK(report.value().added == 5);
    CHECK(report.value().removed == 0);

    const std::int64_t refs = link_all_references(store);
    CHECK(refs == 1);
    auto cited = store.find_by_url("repo.uni.edu", "https://repo.uni.edu/p1");
    REQUIRE(cited.has_value());
    CHECK(store.get_record(*cited)->cited_by.size() == 1);

    // Second snapshot: p0 and p4 vanished.
    SourceSnapshot second = snapshot("repo.uni.edu", true, {2017, 4, 1});
    second.documents = {source.documents[1], source.documents[2], source.documents[3]};
    auto report2 = ingest_snapshot(second, store);
    REQUIRE(report2.ok());
    CHECK(report2.value().removed == 2);
    CHECK(report2.value().updated == 3);
    // The citation p0 provided to p1 is retracted.
    CHECK(store.get_record(*cited)->cited_by.empty());
}

TEST_CASE("ingest: stale snapshot date is rejected") {
    CorpusStore store;
    auto source = snapshot("repo.uni.edu", true, {2017, 4, 1});
    REQUIRE(ingest_snapshot(source, store).ok());
    auto stale = snapshot("repo.uni.edu", true, {2017, 3, 1});
    auto res = ingest_snapshot(stale, store);
    REQUIRE(!res.ok());
    CHECK(res.error().code == "stale-snapshot");
}

TEST_CASE("ingest: book review on a whitelisted repo is included via location") {
    CorpusStore store;
    auto source = snapshot("repo.uni.edu", true);
    RawDocument review = plain_doc("https://repo.uni.edu/review1");
    review.body = scholarly_body("Review of a recent monograph", "R. Reviewer", 0);
    source.documents.push_back(review);
    auto report = ingest_snapshot(source, store);
    REQUIRE(report.ok());
    CHECK(report.value().added == 1);
}

TEST_CASE("ingest: same snapshot twice leaves an identical store") {
    CorpusStore store;
    auto source = snapshot("repo.uni.edu", true);
    for (int i = 0; i < 4; ++i) {
        RawDocument d = plain_doc("https://repo.uni.edu/p" + std::to_string(i));
        d.meta_tags = {
            tag(MetaScheme::highwire, "citation_title", "Stable paper " + std::to_string(i)),
            tag(MetaScheme::highwire, "citation_author", "Writer, W."),
            tag(MetaScheme::highwire, "citation_publication_date", "2015-01-01"),
        };
        source.documents.push_back(d);
    }
    REQUIRE(ingest_snapshot(source, store).ok());
    std::ostringstream first;
    store.serialize(first);

    auto report = ingest_snapshot(source, store);
    REQUIRE(report.ok());
    CHECK(report.value().added == 0);
    CHECK(report.value().updated == 4);
    std::ostringstream second;
    store.serialize(second);
    CHECK(first.str() == second.str());
}

TEST_CASE("ingest: oversize doc is added without references") {
    CorpusStore store;
    auto source = snapshot("repo.uni.edu", true);
    RawDocument d = plain_doc("https://repo.uni.edu/huge");
    d.byte_size = 6 * 1024 * 1024;
    d.body = scholarly_body("An enormous document", "B. Big", 3);
    source.documents.push_back(d);
    REQUIRE(ingest_snapshot(source, store).ok());
    auto id = store.find_by_url("repo.uni.edu", "https://repo.uni.edu/huge");
    REQUIRE(id.has_value());
    CHECK(store.get_record(*id)->raw_references.empty());
}

TEST_CASE("snapshot reading rejects broken trees") {
    namespace fs = std::filesystem;
    std::error_code ec;
    const std::string base = "ingest_bad_tree_tmp";
    fs::remove_all(base, ec);

    CHECK(!scholarlite::read_snapshot(base + "/missing").ok());
    CHECK(!scholarlite::read_snapshot_tree(base + "/missing").ok());

    fs::create_directories(base + "/snap");
    {
        std::ofstream manifest(base + "/snap/manifest.json");
        manifest << "{ not json";
    }
    CHECK(!scholarlite::read_snapshot(base + "/snap").ok());
    {
        std::ofstream manifest(base + "/snap/manifest.json");
        manifest << R"({"domain":"a.example.org","tld":"com","snapshot_date":"2017-03-01",)"
                 << R"("location_whitelisted":false,"documents":[]})";
    }
    auto mismatched = scholarlite::read_snapshot(base + "/snap");
    REQUIRE(!mismatched.ok());  // tld is not the terminal label of domain
    {
        std::ofstream manifest(base + "/snap/manifest.json");
        manifest << R"({"domain":"a.example.org","tld":"org","snapshot_date":"2017-03-01",)"
                 << R"("location_whitelisted":false,"documents":[)"
                 << R"({"url":"u1","text_file":"missing.txt","meta_tags":[],)"
                 << R"("byte_size":1,"file_kind":"html","abstract_visible":true,"searchable":true}]})";
    }
    CHECK(!scholarlite::read_snapshot(base + "/snap").ok());  // text file absent
    fs::remove_all(base, ec);
}

TEST_CASE("blocks file parsing validates structure") {
    namespace fs = std::filesystem;
    std::error_code ec;
    const std::string base = "ingest_blocks_tmp";
    fs::remove_all(base, ec);
    fs::create_directories(base);
    auto write = [&](const char* name, const char* content) {
        std::ofstream out(fs::path(base) / name);
        out << content;
        return (fs::path(base) / name).string();
    };
    CHECK(scholarlite::parse_blocks_file(write("ok.txt", "1\t20\tTitle\n2\t10\tBody\n"), true).ok());
    CHECK(!scholarlite::parse_blocks_file(write("short.txt", "1\t20\n"), true).ok());
    CHECK(!scholarlite::parse_blocks_file(write("badfont.txt", "1\tzz\tText\n"), true).ok());
    CHECK(!scholarlite::parse_blocks_file(write("badpage.txt", "0\t10\tText\n"), true).ok());
    CHECK(!scholarlite::parse_blocks_file(write("regress.txt", "2\t10\tA\n1\t10\tB\n"), true).ok());
    fs::remove_all(base, ec);
}
