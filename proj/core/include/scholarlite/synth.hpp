#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "scholarlite/error.hpp"
#include "scholarlite/estimation.hpp"
#include "scholarlite/store.hpp"
#include "scholarlite/types.hpp"

namespace scholarlite {

struct CorpusConfig {
    std::uint64_t seed = 1;
    std::int64_t n_documents = 1000;
    std::pair<int, int> year_range{1990, 2016};
    std::map<Language, double> language_shares;  // sums to 1
    std::map<DocType, double> type_shares;       // sums to 1
    double duplicate_rate = 0.1;       // docs given 2-3 versions
    double stub_reference_rate = 0.1;  // references pointing outside the corpus
    double citation_exponent = 2.2;    // power-law exponent for citation counts
    double churn_rate = 0.0;           // docs vanishing between snapshots

    static CorpusConfig defaults();
    Result<void> validate() const;

    /// key=value file; shares are "name:frac,name:frac" lists and the year
    /// range is "lo..hi".
    static Result<CorpusConfig> parse_file(const std::string& path);
    static Result<CorpusConfig> parse_text(const std::string& text);
};

struct TruthDocument {
    std::int64_t index = 0;
    std::string title;
    std::string first_author_surname;
    std::string first_author_initials;
    int year = 0;
    Language language = Language::unknown;
    DocType doc_type = DocType::unknown;
    std::string source_name;
    std::string home_domain;
    std::vector<std::string> copy_domains;  // includes home
    bool churned = false;
};

struct TruthVersionGroup {
    std::int64_t doc_index = 0;
    std::string title;
    std::vector<std::string> domains;
};

struct GroundTruth {
    std::int64_t true_size = 0;  // surviving full records after merge
    std::map<int, std::int64_t> per_year;
    std::map<Language, std::int64_t> per_language;
    std::map<DocType, std::int64_t> per_type;
    std::map<std::int64_t, std::set<std::int64_t>> true_citation_graph;  // cited -> citers
    std::vector<TruthVersionGroup> version_groups;
    std::vector<TruthDocument> documents;
    std::int64_t expected_stubs = 0;  // phantom targets plus cited churn victims
    std::vector<std::string> tlds;    // exhaustive TLD list of the corpus

    std::string to_json() const;
};

struct GeneratedCorpus {
    std::vector<SourceSnapshot> snapshots;  // ordered by date, then domain
    GroundTruth truth;
};

/// Deterministic corpus with full ground truth. Ingesting the snapshots and
/// merging versions reproduces true_size full records, the planted version
/// groups, and the planted citation graph.
Result<GeneratedCorpus> generate_corpus(const CorpusConfig& config);

struct ReferenceDbSelectivity {
    bool journal_only = false;
    double english_bias = 0.0;  // extra keep-probability for English records
    double coverage = 1.0;      // baseline keep-probability
};

struct ReferenceDb {
    std::set<RecordId> selected;
    std::map<RecordId, std::int64_t> citation_counts;  // graph restricted to selected
    std::vector<ComparisonRow> rows;                   // citations_a = corpus, _b = reference

    std::string to_csv() const;
};

/// Selective WoS-style benchmark database drawn from an ingested corpus; its
/// citation graph is the corpus graph restricted to the selected records, so
/// corpus counts dominate by construction.
Result<ReferenceDb> generate_reference_db(const CorpusStore& store,
                                          const ReferenceDbSelectivity& selectivity,
                                          std::uint64_t seed = 1);

struct GroundTruthReport {
    std::string summary_csv;
    std::string per_year_csv;
    std::string per_language_csv;
    std::string per_type_csv;
};

GroundTruthReport ground_truth_report(const GroundTruth& truth);

}  // namespace scholarlite
