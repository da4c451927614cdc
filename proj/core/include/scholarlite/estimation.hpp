#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scholarlite/error.hpp"
#include "scholarlite/query.hpp"
#include "scholarlite/types.hpp"

namespace scholarlite {

enum class EstimationMethod {
    absurd_query,
    year_query,
    domain_sum,
    capture_recapture,
    language_proportion,
};

const char* to_string(EstimationMethod m);
std::optional<EstimationMethod> estimation_method_from_string(const std::string& s);

struct SizeEstimate {
    EstimationMethod method = EstimationMethod::absurd_query;
    std::int64_t value = 0;
    std::optional<std::map<std::string, std::int64_t>> per_bucket;  // year or domain
    std::vector<std::string> diagnostics;

    std::string to_json() const;
    std::string to_csv() const;  // bucket rows plus a total row
};

struct ComparisonRow {
    RecordId record_id;
    std::int64_t citations_a = 0;
    std::int64_t citations_b = 0;
};

struct EstimateFlags {
    bool include_citations = true;
    bool include_patents = true;
};

/// One keyword-free year query per year, each carrying the exclusion of a
/// domain that exists nowhere, summed over the span. Documents without a
/// pub_year are invisible to year buckets; the diagnostics quantify that
/// blind spot.
SizeEstimate estimate_absurd(const QueryEngine& engine, std::pair<int, int> years,
                             const EstimateFlags& flags = {});

/// Same protocol without the absurd exclusion term.
SizeEstimate estimate_year_query(const QueryEngine& engine, std::pair<int, int> years,
                                 const EstimateFlags& flags = {});

/// Sum of site: queries over the TLD list, citations and patents excluded.
/// site: sees only primary versions, so this can undercount; the diagnostics
/// say so. Duplicate TLDs error.
Result<SizeEstimate> estimate_domain_sum(const QueryEngine& engine,
                                         const std::vector<std::string>& tlds);

struct CaptureRecaptureOptions {
    bool chapman_correction = false;
};

/// Lincoln-Petersen: N = |A|*|B| / |A∩B|, rounded; Chapman's correction via
/// the flag. Disjoint samples error with "no-overlap".
Result<SizeEstimate> estimate_capture_recapture(const std::set<RecordId>& sample_a,
                                                const std::set<RecordId>& sample_b,
                                                const CaptureRecaptureOptions& options = {});

/// total = count(language = reference) / known_share, rounded.
Result<SizeEstimate> estimate_language_proportion(const QueryEngine& engine,
                                                  Language reference_language,
                                                  double known_share);

struct CorrelationMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> values;  // NaN where undefined
    std::vector<std::string> diagnostics;
};

/// Pairwise Pearson correlation of per-year series (shared buckets only).
/// Constant series leave NaN entries flagged in the diagnostics.
Result<CorrelationMatrix> method_correlation(const std::vector<SizeEstimate>& estimates);

/// Whole days from online availability to indexing; "negative-speed" when
/// indexed before online.
Result<std::int64_t> indexing_speed(const Date& online_date, const Date& indexed_date);

struct IndexSpeedRow {
    std::int64_t days = 0;
    std::string margin_note;  // carries the +/- 2 day margin
};

/// Speed derived from ages when only ages are known (online_age minus
/// days_since_index), annotated with the 2-day margin of error.
Result<IndexSpeedRow> indexing_speed_from_ages(std::int64_t online_age,
                                               std::int64_t days_since_index);

/// (sum of A citations) / (sum of B citations), reported to 2 decimals.
Result<double> citation_ratio(const std::vector<ComparisonRow>& rows);

/// Spearman rank correlation with average ranks for ties; a constant column
/// errors with "constant-column".
Result<double> spearman(const std::vector<ComparisonRow>& rows);

double pearson(const std::vector<double>& a, const std::vector<double>& b);

/// Average ranks (1-based); ties share the mean of their positions.
std::vector<double> average_ranks(const std::vector<double>& values);

struct DistributionRow {
    std::string label;
    std::int64_t count = 0;
    double percent = 0.0;  // half-up, 2 decimals
};

struct LanguageDistribution {
    std::vector<DistributionRow> rows;
    std::int64_t total = 0;

    std::string to_csv() const;
};

/// Builds the percent table from externally supplied counts, preserving row
/// order. Percentages are half-up to 2 decimals of the grand total.
LanguageDistribution language_distribution_from_counts(
    const std::vector<std::pair<std::string, std::int64_t>>& counts);

/// Keyword-free year-query sums per language (citations and patents
/// excluded) over the year span.
LanguageDistribution language_distribution(const QueryEngine& engine, std::pair<int, int> years);

/// Counts per doc_type, unknown included as its own row.
std::map<DocType, std::int64_t> doc_type_distribution(const std::vector<DocumentRecord>& sample);

struct SizeReport {
    std::vector<std::pair<std::string, std::int64_t>> components;
    std::int64_t total = 0;
    std::vector<std::string> diagnostics;

    std::string to_json() const;
};

/// Adds up components; when a published total is supplied and disagrees with
/// the sum, a diagnostic records both numbers instead of silently matching
/// either.
SizeReport make_size_report(const std::vector<std::pair<std::string, std::int64_t>>& components,
                            std::optional<std::int64_t> published_total = std::nullopt);

}  // namespace scholarlite
