#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scholarlite/date.hpp"

namespace scholarlite {

using RecordId = std::string;

enum class RecordKind { full, citation_stub };

/// How a citation stub was discovered: linked stubs come from metadata-only
/// catalogues and carry minimal bibliographic fields; unlinked stubs exist
/// only because some reference list mentioned them.
enum class StubLinkage { linked, unlinked, not_applicable };

/// The interface's selectable languages plus unknown.
enum class Language {
    simplified_chinese,
    traditional_chinese,
    dutch,
    english,
    french,
    german,
    italian,
    japanese,
    korean,
    polish,
    portuguese,
    spanish,
    turkish,
    unknown,
};

inline constexpr int kLanguageCount = 14;  // 13 named + unknown

enum class DocType { article, book_chapter, thesis, conference, report, patent, other, unknown };

enum class SourceType { publisher, repository, database, social, university, other };

enum class FileKind { html, pdf, doc, other };

enum class MetaScheme { highwire, eprints, bepress, prism, dublin_core };

const char* to_string(RecordKind v);
const char* to_string(StubLinkage v);
const char* to_string(Language v);
const char* to_string(DocType v);
const char* to_string(SourceType v);
const char* to_string(FileKind v);
const char* to_string(MetaScheme v);

std::optional<RecordKind> record_kind_from_string(const std::string& s);
std::optional<StubLinkage> stub_linkage_from_string(const std::string& s);
std::optional<Language> language_from_string(const std::string& s);
std::optional<DocType> doc_type_from_string(const std::string& s);
std::optional<SourceType> source_type_from_string(const std::string& s);
std::optional<FileKind> file_kind_from_string(const std::string& s);
std::optional<MetaScheme> meta_scheme_from_string(const std::string& s);

struct AuthorName {
    std::string surname;
    std::string given_initials;          // "J.L." style, may be empty
    std::optional<std::string> full_given;

    bool operator==(const AuthorName&) const = default;
};

/// One copy of a document somewhere on the (synthetic) web.
struct VersionRef {
    std::string url;
    std::string source_domain;           // TLD-bearing host
    SourceType source_type = SourceType::other;
    std::int64_t byte_size = 0;
    bool has_searchable_text = false;
    FileKind file_kind = FileKind::html;

    bool operator==(const VersionRef&) const = default;
};

/// One bibliographic item, full or [CITATION] stub.
struct DocumentRecord {
    RecordId record_id;
    RecordKind kind = RecordKind::full;
    StubLinkage stub_linkage = StubLinkage::not_applicable;
    std::string title;
    std::vector<AuthorName> authors;
    std::optional<int> pub_year;
    std::string source_name;             // journal/conference, empty = none
    Language language = Language::unknown;
    DocType doc_type = DocType::unknown;
    std::vector<VersionRef> versions;
    std::optional<std::size_t> primary_version;
    std::optional<std::string> abstract;
    std::vector<std::string> raw_references;
    std::set<RecordId> cited_by;
    Date indexed_at;
    std::optional<Date> online_at;
};

/// A text block as extracted from a page: what it says, how big the font
/// was, and which page it sat on.
struct TextBlock {
    std::string text;
    double font_size = 0.0;
    int page = 1;
};

struct StructuredText {
    std::vector<TextBlock> blocks;       // pages non-decreasing in block order
    bool searchable = true;
};

struct MetaTag {
    MetaScheme scheme = MetaScheme::highwire;
    std::string key;
    std::string value;
};

struct RawDocument {
    std::string url;                     // unique within a snapshot
    std::vector<MetaTag> meta_tags;
    StructuredText body;
    std::int64_t byte_size = 0;
    FileKind file_kind = FileKind::html;
    bool abstract_visible = true;
};

/// A crawlable source at a point in time.
struct SourceSnapshot {
    std::string domain;
    std::string tld;                     // terminal label of domain
    bool location_whitelisted = false;
    SourceType source_type = SourceType::other;
    std::vector<RawDocument> documents;
    Date snapshot_date;
};

struct RecordFilter {
    std::optional<RecordKind> kind;
    std::optional<std::pair<int, int>> year_range;  // inclusive
    std::optional<Language> language;
};

/// Terminal label of a host name ("adsabs.harvard.edu" -> "edu").
std::string tld_of(const std::string& domain);

}  // namespace scholarlite
