#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scholarlite/error.hpp"
#include "scholarlite/store.hpp"
#include "scholarlite/types.hpp"

namespace scholarlite {

struct ParsedReference {
    std::optional<std::string> title;
    std::optional<std::string> first_author_surname;
    std::optional<int> year;
};

struct MatchConfig {
    double title_similarity_threshold = 0.90;
    int year_tolerance = 1;  // advance-online vs issue years differ by one
};

struct CitationOutcome {
    RecordId cited;
    bool created_stub = false;
};

struct VersionGroup {
    std::vector<RecordId> member_ids;  // size >= 2
    RecordId chosen_primary;
};

/// Segments a raw reference string: year is the first in-range 4-digit
/// token, the first author surname is the leading non-initial token, and the
/// title is the longest quoted or mid-segment span. Returns nullopt when
/// neither a year nor a title can be found.
std::optional<ParsedReference> parse_reference(const std::string& text,
                                               int current_year = CorpusStore::kDefaultCurrentYear);

/// The unique record whose normalized title similarity clears the threshold,
/// whose year is within tolerance, and whose first-author surname matches.
/// Similarity ties go to the higher citation count, then the smaller id.
std::optional<RecordId> match_reference(const ParsedReference& ref, const CorpusStore& store,
                                        const MatchConfig& config = {});

/// Links citing -> cited, creating an unlinked [CITATION] stub when nothing
/// matches. Reprocessing the same (citing, reference) pair is a no-op.
/// Stubs cannot cite: error "stub-cannot-cite".
Result<CitationOutcome> record_citation(const RecordId& citing, const std::string& reference_text,
                                        CorpusStore& store, const MatchConfig& config = {});

/// Processes every raw reference of every full record. Returns the number of
/// references processed.
std::int64_t link_all_references(CorpusStore& store, const MatchConfig& config = {});

/// Groups full records that agree on pub_year and first-author surname and
/// whose titles are >= 0.90 similar, closed transitively. Stubs never seed a
/// group but are absorbed into one when their parsed fields line up.
std::vector<VersionGroup> detect_versions(const CorpusStore& store, const MatchConfig& config = {});

/// Collapses a version group into its chosen primary: versions and citing
/// sets are unioned (duplicate citers collapse, which repairs split
/// citations), other ids are retired and forwarded. Errors with
/// "stale-group" when a member no longer exists.
Result<RecordId> merge_versions(const VersionGroup& group, CorpusStore& store);

/// Version-of-record selection: publisher > database > repository >
/// university/other > social, ties broken by the smallest url.
RecordId select_primary(const std::vector<DocumentRecord>& members);

/// |cited_by|, optionally restricted to citing records published inside the
/// window. Unknown id: error "not_found".
Result<std::int64_t> citation_count(const RecordId& id, const CorpusStore& store,
                                    std::optional<std::pair<int, int>> window = std::nullopt);

/// detect_versions + merge_versions until a fixed point; returns merges done.
std::int64_t merge_all_versions(CorpusStore& store, const MatchConfig& config = {});

}  // namespace scholarlite
