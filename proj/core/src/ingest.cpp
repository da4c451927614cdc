#include "scholarlite/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <future>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "scholarlite/text.hpp"

namespace scholarlite {

const char* to_string(ComplianceViolation v) {
    switch (v) {
        case ComplianceViolation::oversize: return "oversize";
        case ComplianceViolation::unsearchable_pdf: return "unsearchable_pdf";
        case ComplianceViolation::bad_pdf_extension: return "bad_pdf_extension";
        case ComplianceViolation::abstract_hidden: return "abstract_hidden";
        case ComplianceViolation::missing_required_meta: return "missing_required_meta";
    }
    return "oversize";
}

bool ComplianceReport::has(ComplianceViolation v) const {
    return std::find(violations.begin(), violations.end(), v) != violations.end();
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

Language language_from_tag_value(const std::string& raw) {
    const std::string v = lowercase_ascii(trim(raw));
    if (auto lang = language_from_string(v)) return *lang;
    static const std::map<std::string, Language> codes = {
        {"zh", Language::simplified_chinese},
        {"zh-cn", Language::simplified_chinese},
        {"zh-hans", Language::simplified_chinese},
        {"zh-tw", Language::traditional_chinese},
        {"zh-hant", Language::traditional_chinese},
        {"nl", Language::dutch},
        {"en", Language::english},
        {"fr", Language::french},
        {"de", Language::german},
        {"it", Language::italian},
        {"ja", Language::japanese},
        {"ko", Language::korean},
        {"pl", Language::polish},
        {"pt", Language::portuguese},
        {"es", Language::spanish},
        {"tr", Language::turkish},
    };
    auto it = codes.find(v);
    return it == codes.end() ? Language::unknown : it->second;
}

DocType doc_type_from_tag_value(const std::string& raw) {
    const std::string v = lowercase_ascii(trim(raw));
    if (auto t = doc_type_from_string(v)) return *t;
    static const std::map<std::string, DocType> names = {
        {"journal article", DocType::article},
        {"text", DocType::article},
        {"book section", DocType::book_chapter},
        {"book_section", DocType::book_chapter},
        {"chapter", DocType::book_chapter},
        {"dissertation", DocType::thesis},
        {"phd thesis", DocType::thesis},
        {"conference paper", DocType::conference},
        {"conference_item", DocType::conference},
        {"proceedings", DocType::conference},
        {"technical report", DocType::report},
        {"monograph", DocType::report},
    };
    auto it = names.find(v);
    return it == names.end() ? (v.empty() ? DocType::unknown : DocType::other) : it->second;
}

struct SchemeKeys {
    const char* title;
    const char* author;
    std::vector<const char*> dates;
    const char* source;     // nullptr: scheme has no source field
    const char* language;   // nullptr: none
    const char* type;       // nullptr: none
    const char* abstract;   // nullptr: none
    const char* online;     // nullptr: none
};

const SchemeKeys& keys_for(MetaScheme scheme) {
    static const SchemeKeys highwire = {
        "citation_title", "citation_author",
        {"citation_publication_date", "citation_date"},
        "citation_journal_title", "citation_language", nullptr,
        "citation_abstract", "citation_online_date"};
    static const SchemeKeys eprints = {
        "eprints.title", "eprints.creators_name",
        {"eprints.date", "eprints.datestamp"},
        "eprints.publication", "eprints.language", "eprints.type",
        "eprints.abstract", nullptr};
    static const SchemeKeys bepress = {
        "bepress_citation_title", "bepress_citation_author",
        {"bepress_citation_date", "bepress_citation_publication_date"},
        "bepress_citation_journal_title", nullptr, nullptr,
        "bepress_citation_abstract", "bepress_citation_online_date"};
    static const SchemeKeys prism = {
        "prism.title", "prism.creator",
        {"prism.publicationDate", "prism.coverDate"},
        "prism.publicationName", nullptr, nullptr, nullptr, nullptr};
    // Dublin Core is the last resort: no journal title/volume/issue fields.
    static const SchemeKeys dublin = {
        "dc.title", "dc.creator",
        {"dc.date"},
        nullptr, "dc.language", "dc.type",
        "dc.description", nullptr};
    switch (scheme) {
        case MetaScheme::highwire: return highwire;
        case MetaScheme::eprints: return eprints;
        case MetaScheme::bepress: return bepress;
        case MetaScheme::prism: return prism;
        case MetaScheme::dublin_core: return dublin;
    }
    return highwire;
}

// Special Highwire fields that imply a document type when no explicit type
// tag exists.
DocType highwire_implied_type(const std::map<std::string, std::vector<std::string>>& tags,
                              std::string* implied_source) {
    auto grab = [&](const char* key) -> const std::string* {
        auto it = tags.find(key);
        if (it == tags.end() || it->second.empty()) return nullptr;
        return &it->second.front();
    };
    if (grab("citation_patent_number")) return DocType::patent;
    if (const auto* v = grab("citation_dissertation_institution")) {
        *implied_source = *v;
        return DocType::thesis;
    }
    if (const auto* v = grab("citation_technical_report_institution")) {
        *implied_source = *v;
        return DocType::report;
    }
    if (const auto* v = grab("citation_conference_title")) {
        *implied_source = *v;
        return DocType::conference;
    }
    if (const auto* v = grab("citation_inbook_title")) {
        *implied_source = *v;
        return DocType::book_chapter;
    }
    if (grab("citation_journal_title")) return DocType::article;
    return DocType::unknown;
}

}  // namespace

AuthorName parse_author_name(const std::string& text) {
    AuthorName name;
    const std::string t = trim(text);
    auto comma = t.find(',');
    std::string surname_part, given_part;
    if (comma != std::string::npos) {
        surname_part = trim(t.substr(0, comma));
        given_part = trim(t.substr(comma + 1));
    } else {
        auto last_space = t.find_last_of(' ');
        if (last_space == std::string::npos) {
            surname_part = t;
        } else {
            surname_part = trim(t.substr(last_space + 1));
            given_part = trim(t.substr(0, last_space));
        }
    }
    name.surname = surname_part;
    if (!given_part.empty()) {
        std::string initials;
        std::string full;
        std::istringstream words(given_part);
        std::string w;
        bool has_full_word = false;
        while (words >> w) {
            for (std::size_t i = 0; i < w.size(); ++i) {
                if (std::isalpha(static_cast<unsigned char>(w[i])) &&
                    (i + 1 == w.size() || w[i + 1] == '.' ||
                     std::isupper(static_cast<unsigned char>(w[i + 1])))) {
                    if (std::isupper(static_cast<unsigned char>(w[i]))) {
                        initials.push_back(w[i]);
                        initials.push_back('.');
                    }
                }
            }
            // A word with lowercase letters after the first is a spelled-out
            // given name, not an initial cluster.
            if (w.size() > 2 && std::islower(static_cast<unsigned char>(w[1]))) has_full_word = true;
        }
        if (initials.empty() && !given_part.empty()) {
            initials.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(given_part[0]))));
            initials.push_back('.');
        }
        name.given_initials = initials;
        if (has_full_word) {
            full = given_part;
            name.full_given = full;
        }
    }
    return name;
}

namespace {

// "E.", "J.L.", "J.-L." style clusters: letters never adjacent, at least one
// period.
bool initials_chunk(const std::string& chunk) {
    bool any_alpha = false, any_dot = false;
    for (std::size_t i = 0; i < chunk.size(); ++i) {
        const unsigned char c = static_cast<unsigned char>(chunk[i]);
        if (std::isalpha(c)) {
            any_alpha = true;
            if (i + 1 < chunk.size() &&
                std::isalpha(static_cast<unsigned char>(chunk[i + 1]))) {
                return false;
            }
        } else if (c == '.') {
            any_dot = true;
        } else if (c != '-' && c != ' ') {
            return false;
        }
    }
    return any_alpha && any_dot;
}

std::vector<std::string> split_on_separators(const std::string& text, bool commas) {
    std::vector<std::string> parts;
    std::string current;
    const std::string t = trim(text);
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] == ';' || t[i] == '&' || (commas && t[i] == ',')) {
            parts.push_back(current);
            current.clear();
            continue;
        }
        if (t.compare(i, 5, " and ") == 0) {
            parts.push_back(current);
            current.clear();
            i += 4;
            continue;
        }
        current.push_back(t[i]);
    }
    parts.push_back(current);
    return parts;
}

std::vector<AuthorName> parts_to_authors(const std::vector<std::string>& raw) {
    std::vector<AuthorName> out;
    for (const auto& p : raw) {
        const std::string tp = trim(p);
        if (tp.empty()) continue;
        AuthorName name = parse_author_name(tp);
        if (!name.surname.empty()) out.push_back(std::move(name));
    }
    return out;
}

}  // namespace

std::vector<AuthorName> split_author_list(const std::string& text) {
    auto chunks = split_on_separators(text, true);
    // Re-attach "Surname , E." pairs that the comma split tore apart.
    std::vector<std::string> merged;
    for (auto& chunk : chunks) {
        const std::string t = trim(chunk);
        if (t.empty()) continue;
        if (!merged.empty() && initials_chunk(t) && !initials_chunk(merged.back())) {
            merged.back() += ", " + t;
        } else {
            merged.push_back(t);
        }
    }
    return parts_to_authors(merged);
}

std::vector<AuthorName> split_author_tag(const std::string& text) {
    return parts_to_authors(split_on_separators(text, false));
}

std::optional<BibMetadata> parse_meta_tags(const RawDocument& doc,
                                           std::vector<std::string>* diagnostics) {
    // Bucket well-formed tags by scheme; malformed ones (missing value) are
    // skipped and reported.
    std::map<MetaScheme, std::map<std::string, std::vector<std::string>>> by_scheme;
    for (const auto& tag : doc.meta_tags) {
        if (tag.value.empty()) {
            if (diagnostics) {
                diagnostics->push_back("skipped malformed tag '" + tag.key + "' (" +
                                       to_string(tag.scheme) + "): missing value");
            }
            continue;
        }
        by_scheme[tag.scheme][tag.key].push_back(tag.value);
    }

    static constexpr MetaScheme precedence[] = {MetaScheme::highwire, MetaScheme::eprints,
                                                MetaScheme::bepress, MetaScheme::prism,
                                                MetaScheme::dublin_core};
    for (MetaScheme scheme : precedence) {
        auto sit = by_scheme.find(scheme);
        if (sit == by_scheme.end()) continue;
        const auto& tags = sit->second;
        const SchemeKeys& keys = keys_for(scheme);

        auto first_of = [&](const char* key) -> const std::string* {
            if (!key) return nullptr;
            auto it = tags.find(key);
            if (it == tags.end() || it->second.empty()) return nullptr;
            return &it->second.front();
        };

        const std::string* title = first_of(keys.title);
        if (!title) {
            if (diagnostics) {
                diagnostics->push_back(std::string("scheme ") + to_string(scheme) +
                                       " present but yields no title");
            }
            continue;
        }

        BibMetadata meta;
        meta.title = trim(*title);
        if (auto it = tags.find(keys.author); it != tags.end()) {
            for (const auto& value : it->second) {
                for (auto& a : split_author_tag(value)) meta.authors.push_back(std::move(a));
            }
        }
        for (const char* dkey : keys.dates) {
            if (const std::string* d = first_of(dkey)) {
                meta.pub_year = first_year_token(*d, 9999 /* bounded by store on upsert */);
                if (meta.pub_year) break;
            }
        }
        if (const std::string* s = first_of(keys.source)) meta.source_name = trim(*s);
        if (const std::string* l = first_of(keys.language)) meta.language = language_from_tag_value(*l);
        if (const std::string* t = first_of(keys.type)) meta.doc_type = doc_type_from_tag_value(*t);
        if (const std::string* a = first_of(keys.abstract)) meta.abstract = trim(*a);
        if (const std::string* o = first_of(keys.online)) meta.online_at = Date::from_iso(trim(*o));

        if (scheme == MetaScheme::highwire && meta.doc_type == DocType::unknown) {
            std::string implied_source;
            meta.doc_type = highwire_implied_type(tags, &implied_source);
            if (meta.source_name.empty() && !implied_source.empty()) {
                meta.source_name = trim(implied_source);
            }
        }
        if (scheme == MetaScheme::bepress && meta.doc_type == DocType::unknown &&
            !meta.source_name.empty()) {
            meta.doc_type = DocType::article;
        }
        if (scheme == MetaScheme::prism && meta.doc_type == DocType::unknown &&
            !meta.source_name.empty()) {
            meta.doc_type = DocType::article;
        }
        meta.incomplete_source_fields = scheme == MetaScheme::dublin_core;
        return meta;
    }
    return std::nullopt;
}

Result<std::optional<BibMetadata>> parse_fulltext_layout(const StructuredText& text) {
    if (!text.searchable) {
        return Error{"image-only", "unsearchable text: full text will not be processed"};
    }
    if (text.blocks.empty()) return std::optional<BibMetadata>{};

    double max_font = 0.0;
    for (const auto& b : text.blocks) max_font = std::max(max_font, b.font_size);

    const TextBlock& first = text.blocks.front();
    // The title must be the first content in the document and nothing may be
    // displayed with a larger font.
    if (first.page != 1 || first.font_size < max_font || trim(first.text).empty()) {
        return std::optional<BibMetadata>{};
    }

    // Modal body font: most frequent size; ties resolve to the smallest.
    std::map<double, int> font_freq;
    for (const auto& b : text.blocks) ++font_freq[b.font_size];
    double body_font = first.font_size;
    int best = 0;
    for (const auto& [size, count] : font_freq) {
        if (count > best) {
            best = count;
            body_font = size;
        }
    }

    BibMetadata meta;
    meta.title = trim(first.text);

    std::size_t next = 1;
    if (text.blocks.size() > 1) {
        const TextBlock& second = text.blocks[1];
        if (second.page == 1 && second.font_size < first.font_size &&
            second.font_size > body_font) {
            meta.authors = split_author_list(second.text);
            next = 2;
        }
    }
    for (std::size_t i = next; i < text.blocks.size(); ++i) {
        if (text.blocks[i].page != 1) break;
        const std::string abs = trim(text.blocks[i].text);
        if (!abs.empty()) {
            meta.abstract = abs;
            break;
        }
    }
    return std::optional<BibMetadata>{std::move(meta)};
}

std::vector<std::string> extract_references(const StructuredText& text) {
    if (!text.searchable) return {};
    std::size_t heading = text.blocks.size();
    for (std::size_t i = 0; i < text.blocks.size(); ++i) {
        const std::string t = lowercase_ascii(trim(text.blocks[i].text));
        if (t == "references" || t == "bibliography") heading = i;
    }
    if (heading >= text.blocks.size()) return {};

    // Join the tail and split on numbered-entry boundaries at line starts.
    std::vector<std::string> lines;
    for (std::size_t i = heading + 1; i < text.blocks.size(); ++i) {
        const std::string t = trim(text.blocks[i].text);
        if (!t.empty()) lines.push_back(t);
    }
    if (lines.empty()) return {};

    auto marker_len = [](const std::string& s) -> std::size_t {
        // "[12] " or "12. "
        if (s.size() >= 3 && s[0] == '[') {
            std::size_t i = 1;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            if (i > 1 && i < s.size() && s[i] == ']') return i + 1;
            return 0;
        }
        std::size_t i = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i > 0 && i < s.size() && s[i] == '.') return i + 1;
        return 0;
    };

    bool any_marker = false;
    for (const auto& l : lines) {
        if (marker_len(l) > 0) {
            any_marker = true;
            break;
        }
    }
    if (!any_marker) return lines;  // one entry per block

    std::vector<std::string> entries;
    std::string current;
    for (const auto& l : lines) {
        if (marker_len(l) > 0) {
            if (!current.empty()) entries.push_back(current);
            current = l;
        } else if (!current.empty()) {
            current += " " + l;
        }
        // Text before the first marker is heading residue; drop it.
    }
    if (!current.empty()) entries.push_back(current);
    return entries;
}

ComplianceReport check_compliance(const RawDocument& doc) {
    ComplianceReport report;

    if (doc.byte_size > kMaxFulltextBytes) {
        // Oversize documents stay findable, but their full text (including
        // cited references) is excluded.
        report.violations.push_back(ComplianceViolation::oversize);
        report.fulltext_indexed = false;
    }
    if (doc.file_kind == FileKind::pdf) {
        const std::string low = lowercase_ascii(doc.url);
        if (low.size() < 4 || low.compare(low.size() - 4, 4, ".pdf") != 0) {
            report.violations.push_back(ComplianceViolation::bad_pdf_extension);
            report.indexable = false;
        }
        if (!doc.body.searchable) {
            report.violations.push_back(ComplianceViolation::unsearchable_pdf);
            report.fulltext_indexed = false;
        }
    }
    if (!doc.abstract_visible) {
        report.violations.push_back(ComplianceViolation::abstract_hidden);
        report.indexable = false;
    }
    if (!doc.meta_tags.empty()) {
        auto meta = parse_meta_tags(doc);
        if (!meta || meta->authors.empty() || !meta->pub_year) {
            // Title, authors, and publication date are the compulsory fields.
            // Advisory only: full-text parsing may still recover the record.
            report.violations.push_back(ComplianceViolation::missing_required_meta);
        }
    }
    return report;
}

ClassifyResult classify_academic(const RawDocument& doc, const SourceSnapshot& source) {
    if (source.location_whitelisted) {
        return {AcademicDecision::academic, ClassifyRoute::location};
    }
    auto layout = parse_fulltext_layout(doc.body);
    const bool layout_ok = layout.ok() && layout.value().has_value();
    const bool has_refs = layout_ok && !extract_references(doc.body).empty();
    if (layout_ok && has_refs) {
        return {AcademicDecision::academic, ClassifyRoute::parser};
    }
    // Meta tags suffice when the layout heuristics fail.
    if (parse_meta_tags(doc)) {
        return {AcademicDecision::academic, ClassifyRoute::parser};
    }
    return {AcademicDecision::non_academic, ClassifyRoute::parser};
}

namespace {

struct ParsedDoc {
    const RawDocument* doc = nullptr;
    ComplianceReport compliance;
    ClassifyResult classification;
    std::optional<BibMetadata> meta;
    std::optional<BibMetadata> layout;
    std::vector<std::string> references;
};

ParsedDoc parse_one(const RawDocument& doc, const SourceSnapshot& source) {
    ParsedDoc p;
    p.doc = &doc;
    p.compliance = check_compliance(doc);
    p.classification = classify_academic(doc, source);
    p.meta = parse_meta_tags(doc);
    if (auto layout = parse_fulltext_layout(doc.body); layout.ok()) {
        p.layout = layout.value();
    }
    if (p.compliance.fulltext_indexed && doc.body.searchable) {
        p.references = extract_references(doc.body);
    }
    return p;
}

std::string title_from_url(const std::string& url) {
    auto slash = url.find_last_of('/');
    std::string tail = slash == std::string::npos ? url : url.substr(slash + 1);
    if (tail.empty()) tail = url;
    return tail;
}

}  // namespace

Result<IngestReport> ingest_snapshot(const SourceSnapshot& source, CorpusStore& store) {
    if (auto prev = store.last_snapshot_date(source.domain)) {
        if (source.snapshot_date < *prev) {
            return Error{"stale-snapshot",
                         "snapshot for " + source.domain + " is older than the previous one"};
        }
    }

    // Parse in parallel; mutate in document order afterwards so results are
    // deterministic.
    std::vector<ParsedDoc> parsed(source.documents.size());
    const std::size_t n = source.documents.size();
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (n >= 64 && hw > 1) {
        std::vector<std::future<void>> futures;
        const std::size_t chunk = (n + hw - 1) / hw;
        for (unsigned t = 0; t < hw; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(n, begin + chunk);
            if (begin >= end) break;
            futures.push_back(std::async(std::launch::async, [&, begin, end] {
                for (std::size_t i = begin; i < end; ++i) {
                    parsed[i] = parse_one(source.documents[i], source);
                }
            }));
        }
        for (auto& f : futures) f.get();
    } else {
        for (std::size_t i = 0; i < n; ++i) parsed[i] = parse_one(source.documents[i], source);
    }

    IngestReport report;
    const auto previous_urls = store.urls_for_domain(source.domain);
    std::set<std::string> seen_urls;

    for (const ParsedDoc& p : parsed) {
        const RawDocument& doc = *p.doc;
        seen_urls.insert(doc.url);

        if (!p.compliance.indexable ||
            p.classification.decision == AcademicDecision::non_academic) {
            ++report.rejected;
            continue;
        }

        // Meta tags first; full-text layout when no usable tags exist.
        BibMetadata meta;
        if (p.meta) {
            meta = *p.meta;
            if (!meta.abstract && p.layout && p.layout->abstract) {
                meta.abstract = p.layout->abstract;
            }
        } else if (p.layout) {
            meta = *p.layout;
        } else {
            // Location route with nothing recoverable: index it anyway under
            // a URL-derived title.
            meta.title = title_from_url(doc.url);
        }

        VersionRef version;
        version.url = doc.url;
        version.source_domain = source.domain;
        version.source_type = source.source_type;
        version.byte_size = doc.byte_size;
        version.has_searchable_text = doc.body.searchable;
        version.file_kind = doc.file_kind;

        DocumentRecord record;
        bool is_update = false;
        if (auto existing_id = store.find_by_url(source.domain, doc.url)) {
            if (auto existing = store.get_record(*existing_id)) {
                record = *existing;
                is_update = true;
            }
        }

        record.kind = RecordKind::full;
        record.stub_linkage = StubLinkage::not_applicable;
        record.title = meta.title;
        record.authors = meta.authors;
        record.pub_year = meta.pub_year;
        record.source_name = meta.source_name;
        record.language = meta.language;
        record.doc_type = meta.doc_type;
        record.abstract = meta.abstract;
        record.online_at = meta.online_at;
        if (p.compliance.fulltext_indexed) {
            record.raw_references = p.references;
        } else {
            record.raw_references.clear();
        }

        if (is_update) {
            // Refresh this domain's version in place, keep the rest.
            bool replaced = false;
            for (auto& v : record.versions) {
                if (v.source_domain == source.domain && v.url == doc.url) {
                    v = version;
                    replaced = true;
                    break;
                }
            }
            if (!replaced) {
                record.versions.push_back(version);
                if (!record.primary_version) record.primary_version = record.versions.size() - 1;
            }
        } else {
            record.versions = {version};
            record.primary_version = 0;
            record.indexed_at = source.snapshot_date;
        }

        auto up = store.upsert_record(std::move(record));
        if (!up.ok()) {
            ++report.rejected;
            continue;
        }
        if (is_update) {
            ++report.updated;
        } else {
            ++report.added;
        }
    }

    // The dynamic-web rule: URLs gone from this domain take their records
    // (and the citations those records provided) with them.
    for (const auto& [url, id] : previous_urls) {
        if (seen_urls.count(url) > 0) continue;
        if (store.remove_record(id)) ++report.removed;
    }

    store.set_last_snapshot_date(source.domain, source.snapshot_date);
    return report;
}

}  // namespace scholarlite
