#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scholarlite/error.hpp"
#include "scholarlite/store.hpp"
#include "scholarlite/types.hpp"

namespace scholarlite {

enum class SortOrder { relevance, date };

struct Query {
    std::vector<std::string> terms;
    std::vector<std::string> intitle_terms;
    std::vector<std::string> author_terms;
    std::optional<std::string> source_term;
    std::optional<std::pair<int, int>> year_range;
    std::optional<std::string> site_include;
    std::vector<std::string> site_exclude;
    std::set<Language> languages;
    bool include_citations = true;
    bool include_patents = true;
    SortOrder sort = SortOrder::relevance;
};

struct ResultPage {
    std::vector<RecordId> hits;
    std::int64_t hit_count_estimate = 0;
    int page_size = 10;
    int page_index = 0;
};

/// exact: hit counts are true counts. rounded(k): counts reported to k
/// significant digits, the way large engines print approximations.
struct NoiseModel {
    enum class Kind { exact, rounded };
    Kind kind = Kind::exact;
    int digits = 3;

    static NoiseModel exact() { return {}; }
    static NoiseModel rounded(int digits) { return {Kind::rounded, digits}; }
    static std::optional<NoiseModel> parse(const std::string& spec);
    std::string to_string() const;
};

struct RelevanceWeights {
    double citation_weight = 1.0;  // alpha
    double language_weight = 0.5;  // beta
};

inline constexpr int kResultCap = 1000;  // only the first 1000 results

/// Grammar: site:D  -site:D  intitle:w  author:"..."  source:"..."
/// year:lo..hi; everything else is a term. Malformed year ranges error with
/// the token position.
Result<Query> parse_query(const std::string& input);

class QueryEngine {
public:
    explicit QueryEngine(const CorpusStore& store, RelevanceWeights weights = {},
                         NoiseModel noise = {});

    /// Full Boolean-AND semantics over terms, field filters, year range,
    /// site filters (site: tests the primary version only; -site: tests all
    /// versions), language set, and record-kind flags. Hits are truncated to
    /// the first 1000 by sort order, then paged. Pages past the cap come back
    /// empty with the estimate intact.
    Result<ResultPage> execute(const Query& query, int page_index = 0, int page_size = 10) const;

    /// True match count pushed through the noise model.
    std::int64_t hit_count_estimate(const Query& query) const;
    std::int64_t hit_count_estimate(const Query& query, const NoiseModel& noise) const;

    /// score = term_match + alpha*ln(1+cites) + beta*[language match];
    /// ties by citation count, then id.
    std::vector<RecordId> rank_relevance(const std::vector<RecordId>& match_ids,
                                         const Query& query) const;

    /// All ids matching the query predicate, unsorted cap-free (id order).
    std::vector<RecordId> match_set(const Query& query) const;

    bool matches(const Query& query, const DocumentRecord& record) const;

    const CorpusStore& store() const { return store_; }
    const RelevanceWeights& weights() const { return weights_; }
    const NoiseModel& noise() const { return noise_; }

private:
    double term_match_score(const Query& query, const DocumentRecord& record) const;

    const CorpusStore& store_;
    RelevanceWeights weights_;
    NoiseModel noise_;
};

enum class ExportFormat { bibtex, endnote, refman, refworks };

std::optional<ExportFormat> export_format_from_string(const std::string& s);

/// Deterministic reference-manager serialization. At most 20 records per
/// batch ("batch-limit"), at most 10 author names per record, never the
/// abstract.
Result<std::string> export_records(const std::vector<RecordId>& ids, ExportFormat format,
                                   const CorpusStore& store);

}  // namespace scholarlite
