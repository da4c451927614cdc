#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scholarlite/error.hpp"
#include "scholarlite/store.hpp"
#include "scholarlite/types.hpp"

namespace scholarlite {

struct AuthorKey {
    std::string surname;
    std::string given_initials;
};

struct AuthorProfile {
    AuthorKey author_key;
    std::vector<RecordId> publications;
    std::int64_t citations_all = 0;
    std::int64_t citations_5y = 0;
    int h_all = 0;
    int h_5y = 0;
    int i10_all = 0;
    int i10_5y = 0;
};

struct JournalMetrics {
    std::string source_name;
    std::pair<int, int> period;  // five consecutive years, inclusive
    std::int64_t n_articles = 0;
    int h5 = 0;
    std::vector<std::pair<RecordId, std::int64_t>> h5_core;  // |h5_core| == h5
    double h5_median = 0.0;
    std::int64_t period_citations = 0;
    Language language = Language::unknown;
    std::vector<std::string> categories;  // "Category/Subcategory" paths
};

/// source_name -> category paths; drives the English per-category rankings.
using JournalCategoryMap = std::map<std::string, std::vector<std::string>>;

struct RankingSet {
    int edition_year = 0;
    std::pair<int, int> period{0, 0};
    std::vector<JournalMetrics> all_included;
    std::map<Language, std::vector<JournalMetrics>> per_language;   // non-English, top 100
    std::map<std::string, std::vector<JournalMetrics>> per_category;  // English, top 20
};

struct IndicatorOptions {
    /// Citation stubs are search-visible citing records; by default they
    /// count toward every indicator.
    bool stubs_count_as_citers = true;
};

/// Largest h such that at least h values are >= h. Errors on negative input.
Result<int> h_index(const std::vector<std::int64_t>& counts);

struct H5Summary {
    int h5 = 0;
    double median = 0.0;  // median of the top-h5 counts; 0 when h5 == 0
};

/// h5 and h5-median straight from a count multiset (the pure core of
/// h5_metrics).
Result<H5Summary> h5_from_counts(const std::vector<std::int64_t>& counts);

/// Number of values >= 10. Errors on negative input.
Result<int> i10_index(const std::vector<std::int64_t>& counts);

/// Per publication, the number of citing records whose pub_year falls in the
/// window (the publication's own year is unrestricted).
std::vector<std::int64_t> windowed_citation_counts(const std::vector<RecordId>& pubs,
                                                   const CorpusStore& store,
                                                   std::pair<int, int> window,
                                                   const IndicatorOptions& options = {});

std::vector<std::int64_t> all_time_citation_counts(const std::vector<RecordId>& pubs,
                                                   const CorpusStore& store,
                                                   const IndicatorOptions& options = {});

/// Both timeframes of the author indicators; the five-year window is
/// [current_year-4, current_year].
AuthorProfile build_author_profile(const AuthorKey& key, const CorpusStore& store,
                                   int current_year, const IndicatorOptions& options = {});

/// h5 family for one source over a five-year period; citations are counted
/// only when the citing record's pub_year falls inside the same period. Core
/// ties at the threshold break by record id.
JournalMetrics h5_metrics(const std::string& source_name, std::pair<int, int> period,
                          const CorpusStore& store, const IndicatorOptions& options = {});

/// At least 100 articles in the period and at least one citation.
bool gsm_inclusion(const JournalMetrics& metrics);

/// Edition year Y covers [Y-5, Y-1]. Non-English languages rank their top
/// 100 sources by h5; English sources rank per category path, top 20 each; a
/// journal tagged with several paths appears in each of them.
RankingSet gsm_rankings(const CorpusStore& store, int edition_year,
                        const JournalCategoryMap& categories = {},
                        const IndicatorOptions& options = {});

/// Name-keyword search over all included journals: at most 20 results,
/// sorted by h5.
std::vector<JournalMetrics> gsm_search(const std::string& keyword, const RankingSet& rankings);

/// CSV with the fixed column order: rank, source_name, h5, h5_median,
/// language, category path.
std::string rankings_to_csv(const RankingSet& rankings);

}  // namespace scholarlite
