#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scholarlite/error.hpp"
#include "scholarlite/store.hpp"
#include "scholarlite/types.hpp"

namespace scholarlite {

/// Bibliographic fields recovered from meta tags or full-text layout.
struct BibMetadata {
    std::string title;
    std::vector<AuthorName> authors;
    std::optional<int> pub_year;
    std::string source_name;
    std::optional<std::string> abstract;
    Language language = Language::unknown;
    DocType doc_type = DocType::unknown;
    std::optional<Date> online_at;
    /// Set when the metadata came from Dublin Core, which has no fields for
    /// journal title, volume, issue, or pages.
    bool incomplete_source_fields = false;
};

enum class ComplianceViolation {
    oversize,
    unsearchable_pdf,
    bad_pdf_extension,
    abstract_hidden,
    missing_required_meta,
};

const char* to_string(ComplianceViolation v);

struct ComplianceReport {
    bool indexable = true;
    bool fulltext_indexed = true;
    std::vector<ComplianceViolation> violations;

    bool has(ComplianceViolation v) const;
};

enum class AcademicDecision { academic, non_academic };
enum class ClassifyRoute { location, parser };

struct ClassifyResult {
    AcademicDecision decision = AcademicDecision::non_academic;
    ClassifyRoute route = ClassifyRoute::parser;
};

struct IngestReport {
    std::int64_t added = 0;
    std::int64_t updated = 0;
    std::int64_t removed = 0;
    std::int64_t rejected = 0;
};

inline constexpr std::int64_t kMaxFulltextBytes = 5LL * 1024 * 1024;  // 5MB limit

/// Extracts bibliographic fields from the highest-precedence metadata scheme
/// present (highwire > eprints > bepress > prism > dublin_core). Tags with a
/// missing value are skipped and noted in `diagnostics`. Returns nullopt when
/// no scheme yields a usable title.
std::optional<BibMetadata> parse_meta_tags(const RawDocument& doc,
                                           std::vector<std::string>* diagnostics = nullptr);

/// Layout heuristics over the extracted text:
///  - the title must be the first block and carry the document's largest font;
///  - the authors block immediately follows, with a font strictly between the
///    title font and the modal body font;
///  - the first page-1 block after the authors is taken as the abstract.
/// Fails with "image-only" when the text is unsearchable, and returns nullopt
/// when the title rule fails.
Result<std::optional<BibMetadata>> parse_fulltext_layout(const StructuredText& text);

/// Reference strings from the last "References"/"Bibliography" section,
/// split on numbered-entry boundaries ("[n]" or "n."), one entry per block
/// otherwise. No section means no citations: empty list.
std::vector<std::string> extract_references(const StructuredText& text);

ComplianceReport check_compliance(const RawDocument& doc);

/// Whitelisted locations are academic unconditionally; everything else goes
/// through the parser route (scholarly layout with a reference section, or
/// usable meta tags).
ClassifyResult classify_academic(const RawDocument& doc, const SourceSnapshot& source);

/// Applies one snapshot to the store: classifies and parses every document,
/// creates or updates full records, and removes records whose URL was present
/// in the previous snapshot of this domain but is gone now, retracting the
/// citations those records provided. Rejects stale snapshot dates.
Result<IngestReport> ingest_snapshot(const SourceSnapshot& source, CorpusStore& store);

/// Author-string helpers shared with reference parsing. The layout splitter
/// treats commas as separators (initial clusters like "E." re-attach to the
/// preceding surname); meta-tag values carry one author per tag and split
/// only on ";", "&", and " and ".
AuthorName parse_author_name(const std::string& text);
std::vector<AuthorName> split_author_list(const std::string& text);
std::vector<AuthorName> split_author_tag(const std::string& text);

}  // namespace scholarlite
