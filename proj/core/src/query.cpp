#include "scholarlite/query.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

#include "scholarlite/text.hpp"

namespace scholarlite {

std::optional<NoiseModel> NoiseModel::parse(const std::string& spec) {
    if (spec == "exact") return NoiseModel::exact();
    for (const char* prefix : {"rounded:", "rounded("}) {
        const std::string p = prefix;
        if (spec.rfind(p, 0) == 0) {
            std::string digits = spec.substr(p.size());
            if (!digits.empty() && digits.back() == ')') digits.pop_back();
            try {
                const int k = std::stoi(digits);
                if (k >= 1 && k <= 18) return NoiseModel::rounded(k);
            } catch (const std::exception&) {
            }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

std::string NoiseModel::to_string() const {
    if (kind == Kind::exact) return "exact";
    return "rounded:" + std::to_string(digits);
}

namespace {

// Splits into whitespace-separated tokens, keeping "..." spans (as used by
// author:"..." and source:"...") intact.
struct RawToken {
    std::string text;
    std::size_t position;
};

std::vector<RawToken> lex(const std::string& input) {
    std::vector<RawToken> tokens;
    std::size_t i = 0;
    while (i < input.size()) {
        if (std::isspace(static_cast<unsigned char>(input[i]))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        bool in_quotes = false;
        std::string tok;
        while (i < input.size() && (in_quotes || !std::isspace(static_cast<unsigned char>(input[i])))) {
            if (input[i] == '"') in_quotes = !in_quotes;
            tok.push_back(input[i]);
            ++i;
        }
        tokens.push_back({tok, start});
    }
    return tokens;
}

std::string strip_quotes(std::string s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

}  // namespace

Result<Query> parse_query(const std::string& input) {
    Query q;
    for (const RawToken& tok : lex(input)) {
        const std::string& t = tok.text;
        auto starts = [&](const char* prefix) {
            return t.rfind(prefix, 0) == 0;
        };
        if (starts("-site:")) {
            const std::string d = t.substr(6);
            if (!d.empty()) q.site_exclude.push_back(lowercase_ascii(d));
        } else if (starts("site:")) {
            const std::string d = t.substr(5);
            if (!d.empty()) q.site_include = lowercase_ascii(d);
        } else if (starts("intitle:")) {
            const std::string w = normalize_text(strip_quotes(t.substr(8)));
            if (!w.empty()) q.intitle_terms.push_back(w);
        } else if (starts("author:")) {
            const std::string a = strip_quotes(t.substr(7));
            if (!a.empty()) q.author_terms.push_back(a);
        } else if (starts("source:")) {
            q.source_term = strip_quotes(t.substr(7));
        } else if (starts("year:")) {
            const std::string spec = t.substr(5);
            const auto dots = spec.find("..");
            auto strict_int = [](const std::string& s) -> std::optional<int> {
                if (s.empty() || s.size() > 6) return std::nullopt;
                for (unsigned char c : s) {
                    if (!std::isdigit(c)) return std::nullopt;
                }
                return std::stoi(s);
            };
            std::optional<int> lo, hi;
            if (dots == std::string::npos) {
                lo = hi = strict_int(spec);
            } else {
                lo = strict_int(spec.substr(0, dots));
                hi = strict_int(spec.substr(dots + 2));
            }
            if (!lo || !hi) {
                return Error{"parse-error", "malformed year range at position " +
                                                std::to_string(tok.position)};
            }
            if (*lo > *hi) {
                return Error{"parse-error",
                             "year range lo > hi at position " + std::to_string(tok.position)};
            }
            q.year_range = {*lo, *hi};
        } else {
            const std::string w = normalize_text(strip_quotes(t));
            if (!w.empty()) q.terms.push_back(w);
        }
    }
    return q;
}

QueryEngine::QueryEngine(const CorpusStore& store, RelevanceWeights weights, NoiseModel noise)
    : store_(store), weights_(weights), noise_(noise) {}

namespace {

bool author_term_matches(const std::string& term, const std::vector<AuthorName>& authors) {
    const std::string nterm = normalize_text(term);
    for (const auto& a : authors) {
        if (normalize_text(a.surname) == nterm) return true;
        if (a.full_given && normalize_text(*a.full_given) == nterm) return true;
        // "garfield e" / "e garfield" style compound terms
        const std::string compound1 = normalize_text(a.surname + " " + a.given_initials);
        const std::string compound2 = normalize_text(a.given_initials + " " + a.surname);
        if (nterm == compound1 || nterm == compound2) return true;
        if (a.full_given) {
            const std::string full1 = normalize_text(*a.full_given + " " + a.surname);
            const std::string full2 = normalize_text(a.surname + " " + *a.full_given);
            if (nterm == full1 || nterm == full2) return true;
        }
    }
    return false;
}

bool contains_token(const std::vector<std::string>& haystack, const std::string& needle) {
    return std::find(haystack.begin(), haystack.end(), needle) != haystack.end();
}

bool term_in_text(const std::string& term, const std::vector<std::string>& tokens) {
    // Multi-word terms (from quoted input) require every word present.
    std::istringstream words(term);
    std::string w;
    while (words >> w) {
        if (!contains_token(tokens, w)) return false;
    }
    return true;
}

}  // namespace

bool QueryEngine::matches(const Query& q, const DocumentRecord& r) const {
    // Record-kind flags.
    if (!q.include_citations && r.kind == RecordKind::citation_stub) return false;
    if (!q.include_patents && r.doc_type == DocType::patent) return false;

    // Date sort limits the search to the current year.
    if (q.sort == SortOrder::date) {
        if (!r.pub_year || *r.pub_year != store_.current_year()) return false;
    }

    if (q.year_range) {
        if (!r.pub_year) return false;
        if (*r.pub_year < q.year_range->first || *r.pub_year > q.year_range->second) return false;
    }
    if (!q.languages.empty() && q.languages.count(r.language) == 0) return false;

    // site: consults only the primary version; -site: consults every version.
    if (q.site_include) {
        if (!r.primary_version || *r.primary_version >= r.versions.size()) return false;
        if (!domain_matches(r.versions[*r.primary_version].source_domain, *q.site_include)) {
            return false;
        }
    }
    for (const auto& excluded : q.site_exclude) {
        for (const auto& v : r.versions) {
            if (domain_matches(v.source_domain, excluded)) return false;
        }
    }

    if (!q.author_terms.empty()) {
        for (const auto& term : q.author_terms) {
            if (!author_term_matches(term, r.authors)) return false;
        }
    }
    if (q.source_term) {
        const std::string ns = normalize_text(*q.source_term);
        const std::string nr = normalize_text(r.source_name);
        if (ns.empty() || nr.find(ns) == std::string::npos) return false;
    }

    if (!q.terms.empty() || !q.intitle_terms.empty()) {
        const auto title_tokens = tokenize(r.title);
        for (const auto& term : q.intitle_terms) {
            if (!term_in_text(term, title_tokens)) return false;
        }
        if (!q.terms.empty()) {
            auto searchable = title_tokens;
            if (r.abstract) {
                auto abs_tokens = tokenize(*r.abstract);
                searchable.insert(searchable.end(), abs_tokens.begin(), abs_tokens.end());
            }
            auto src_tokens = tokenize(r.source_name);
            searchable.insert(searchable.end(), src_tokens.begin(), src_tokens.end());
            for (const auto& term : q.terms) {
                if (!term_in_text(term, searchable)) return false;
            }
        }
    }
    return true;
}

std::vector<RecordId> QueryEngine::match_set(const Query& query) const {
    std::vector<RecordId> out;
    store_.for_each([&](const DocumentRecord& r) {
        if (matches(query, r)) out.push_back(r.record_id);
    });
    return out;
}

double QueryEngine::term_match_score(const Query& q, const DocumentRecord& r) const {
    if (q.terms.empty() && q.intitle_terms.empty()) return 0.0;
    const auto title_tokens = tokenize(r.title);
    std::vector<std::string> abs_tokens;
    if (r.abstract) abs_tokens = tokenize(*r.abstract);

    auto count_in = [](const std::vector<std::string>& tokens, const std::string& word) {
        return static_cast<double>(std::count(tokens.begin(), tokens.end(), word));
    };

    double score = 0.0;
    auto score_term = [&](const std::string& term, double title_boost) {
        std::istringstream words(term);
        std::string w;
        while (words >> w) {
            const double tf = title_boost * count_in(title_tokens, w) + count_in(abs_tokens, w);
            if (tf > 0) score += 1.0 + std::log(1.0 + tf);
        }
    };
    for (const auto& term : q.terms) score_term(term, 2.0);
    for (const auto& term : q.intitle_terms) score_term(term, 2.0);
    return score;
}

std::vector<RecordId> QueryEngine::rank_relevance(const std::vector<RecordId>& match_ids,
                                                  const Query& query) const {
    struct Scored {
        RecordId id;
        double score;
        std::int64_t cites;
    };
    std::vector<Scored> scored;
    scored.reserve(match_ids.size());
    for (const RecordId& id : match_ids) {
        auto record = store_.get_record(id);
        if (!record) continue;
        const auto cites = static_cast<std::int64_t>(record->cited_by.size());
        double s = term_match_score(query, *record);
        s += weights_.citation_weight * std::log(1.0 + static_cast<double>(cites));
        if (query.languages.empty() || query.languages.count(record->language) > 0) {
            s += weights_.language_weight;
        }
        scored.push_back({id, s, cites});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.cites != b.cites) return a.cites > b.cites;
        return a.id < b.id;
    });
    std::vector<RecordId> out;
    out.reserve(scored.size());
    for (const auto& s : scored) out.push_back(s.id);
    return out;
}

std::int64_t QueryEngine::hit_count_estimate(const Query& query) const {
    return hit_count_estimate(query, noise_);
}

std::int64_t QueryEngine::hit_count_estimate(const Query& query, const NoiseModel& noise) const {
    const auto exact = static_cast<std::int64_t>(match_set(query).size());
    if (noise.kind == NoiseModel::Kind::exact) return exact;
    return round_significant(exact, noise.digits);
}

Result<ResultPage> QueryEngine::execute(const Query& query, int page_index, int page_size) const {
    if (page_size != 10 && page_size != 20) {
        return Error{"bad-page-size", "page size must be 10 or 20"};
    }
    if (page_index < 0) return Error{"bad-page-index", "page index must be >= 0"};

    auto ids = match_set(query);
    const auto exact = static_cast<std::int64_t>(ids.size());

    ResultPage page;
    page.page_size = page_size;
    page.page_index = page_index;
    page.hit_count_estimate =
        noise_.kind == NoiseModel::Kind::exact ? exact : round_significant(exact, noise_.digits);

    std::vector<RecordId> ordered;
    if (query.sort == SortOrder::relevance) {
        ordered = rank_relevance(ids, query);
    } else {
        // Date sort: newest first by online date, then indexing date.
        std::sort(ids.begin(), ids.end(), [&](const RecordId& a, const RecordId& b) {
            auto ra = store_.get_record(a);
            auto rb = store_.get_record(b);
            const auto da = ra->online_at ? ra->online_at->serial() : ra->indexed_at.serial();
            const auto db = rb->online_at ? rb->online_at->serial() : rb->indexed_at.serial();
            if (da != db) return da > db;
            return a < b;
        });
        ordered = std::move(ids);
    }

    if (ordered.size() > static_cast<std::size_t>(kResultCap)) {
        ordered.resize(kResultCap);
    }

    const std::int64_t begin = static_cast<std::int64_t>(page_index) * page_size;
    if (begin >= static_cast<std::int64_t>(ordered.size()) || begin >= kResultCap) {
        return page;  // past the cap: empty page, estimate intact
    }
    const std::int64_t end =
        std::min<std::int64_t>(begin + page_size, static_cast<std::int64_t>(ordered.size()));
    page.hits.assign(ordered.begin() + begin, ordered.begin() + end);
    return page;
}

std::optional<ExportFormat> export_format_from_string(const std::string& s) {
    const std::string v = lowercase_ascii(s);
    if (v == "bibtex") return ExportFormat::bibtex;
    if (v == "endnote") return ExportFormat::endnote;
    if (v == "refman" || v == "ris") return ExportFormat::refman;
    if (v == "refworks") return ExportFormat::refworks;
    return std::nullopt;
}

namespace {

constexpr std::size_t kExportBatchLimit = 20;
constexpr std::size_t kExportAuthorLimit = 10;

std::string author_display(const AuthorName& a) {
    if (a.full_given && !a.full_given->empty()) return *a.full_given + " " + a.surname;
    if (!a.given_initials.empty()) return a.given_initials + " " + a.surname;
    return a.surname;
}

const char* bibtex_entry_type(DocType t) {
    switch (t) {
        case DocType::article: return "article";
        case DocType::book_chapter: return "incollection";
        case DocType::thesis: return "phdthesis";
        case DocType::conference: return "inproceedings";
        case DocType::report: return "techreport";
        default: return "misc";
    }
}

const char* ris_entry_type(DocType t) {
    switch (t) {
        case DocType::article: return "JOUR";
        case DocType::book_chapter: return "CHAP";
        case DocType::thesis: return "THES";
        case DocType::conference: return "CPAPER";
        case DocType::report: return "RPRT";
        case DocType::patent: return "PAT";
        default: return "GEN";
    }
}

}  // namespace

Result<std::string> export_records(const std::vector<RecordId>& ids, ExportFormat format,
                                   const CorpusStore& store) {
    if (ids.size() > kExportBatchLimit) {
        return Error{"batch-limit", "export is limited to 20 records per batch"};
    }
    std::ostringstream out;
    for (const RecordId& id : ids) {
        auto record = store.get_record(id);
        if (!record) continue;
        const DocumentRecord& r = *record;
        std::vector<std::string> authors;
        for (std::size_t i = 0; i < r.authors.size() && i < kExportAuthorLimit; ++i) {
            authors.push_back(author_display(r.authors[i]));
        }
        const std::string year = r.pub_year ? std::to_string(*r.pub_year) : std::string{};

        switch (format) {
            case ExportFormat::bibtex: {
                out << "@" << bibtex_entry_type(r.doc_type) << "{" << r.record_id << ",\n";
                out << "  title={" << r.title << "},\n";
                if (!authors.empty()) {
                    out << "  author={";
                    for (std::size_t i = 0; i < authors.size(); ++i) {
                        if (i) out << " and ";
                        out << authors[i];
                    }
                    out << "},\n";
                }
                if (!year.empty()) out << "  year={" << year << "},\n";
                if (!r.source_name.empty()) out << "  journal={" << r.source_name << "},\n";
                out << "}\n";
                break;
            }
            case ExportFormat::endnote: {
                out << "%0 Journal Article\n";
                out << "%T " << r.title << "\n";
                for (const auto& a : authors) out << "%A " << a << "\n";
                if (!year.empty()) out << "%D " << year << "\n";
                if (!r.source_name.empty()) out << "%J " << r.source_name << "\n";
                out << "\n";
                break;
            }
            case ExportFormat::refman: {
                out << "TY  - " << ris_entry_type(r.doc_type) << "\n";
                out << "TI  - " << r.title << "\n";
                for (const auto& a : authors) out << "AU  - " << a << "\n";
                if (!year.empty()) out << "PY  - " << year << "\n";
                if (!r.source_name.empty()) out << "JO  - " << r.source_name << "\n";
                out << "ER  - \n";
                break;
            }
            case ExportFormat::refworks: {
                out << "RT Journal Article\n";
                out << "T1 " << r.title << "\n";
                for (const auto& a : authors) out << "A1 " << a << "\n";
                if (!year.empty()) out << "YR " << year << "\n";
                if (!r.source_name.empty()) out << "JF " << r.source_name << "\n";
                out << "\n";
                break;
            }
        }
    }
    return out.str();
}

}  // namespace scholarlite
