#include "scholarlite/types.hpp"

namespace scholarlite {

const char* to_string(RecordKind v) {
    switch (v) {
        case RecordKind::full: return "full";
        case RecordKind::citation_stub: return "citation_stub";
    }
    return "full";
}

const char* to_string(StubLinkage v) {
    switch (v) {
        case StubLinkage::linked: return "linked";
        case StubLinkage::unlinked: return "unlinked";
        case StubLinkage::not_applicable: return "not_applicable";
    }
    return "not_applicable";
}

const char* to_string(Language v) {
    switch (v) {
        case Language::simplified_chinese: return "simplified_chinese";
        case Language::traditional_chinese: return "traditional_chinese";
        case Language::dutch: return "dutch";
        case Language::english: return "english";
        case Language::french: return "french";
        case Language::german: return "german";
        case Language::italian: return "italian";
        case Language::japanese: return "japanese";
        case Language::korean: return "korean";
        case Language::polish: return "polish";
        case Language::portuguese: return "portuguese";
        case Language::spanish: return "spanish";
        case Language::turkish: return "turkish";
        case Language::unknown: return "unknown";
    }
    return "unknown";
}

const char* to_string(DocType v) {
    switch (v) {
        case DocType::article: return "article";
        case DocType::book_chapter: return "book_chapter";
        case DocType::thesis: return "thesis";
        case DocType::conference: return "conference";
        case DocType::report: return "report";
        case DocType::patent: return "patent";
        case DocType::other: return "other";
        case DocType::unknown: return "unknown";
    }
    return "unknown";
}

const char* to_string(SourceType v) {
    switch (v) {
        case SourceType::publisher: return "publisher";
        case SourceType::repository: return "repository";
        case SourceType::database: return "database";
        case SourceType::social: return "social";
        case SourceType::university: return "university";
        case SourceType::other: return "other";
    }
    return "other";
}

const char* to_string(FileKind v) {
    switch (v) {
        case FileKind::html: return "html";
        case FileKind::pdf: return "pdf";
        case FileKind::doc: return "doc";
        case FileKind::other: return "other";
    }
    return "other";
}

const char* to_string(MetaScheme v) {
    switch (v) {
        case MetaScheme::highwire: return "highwire";
        case MetaScheme::eprints: return "eprints";
        case MetaScheme::bepress: return "bepress";
        case MetaScheme::prism: return "prism";
        case MetaScheme::dublin_core: return "dublin_core";
    }
    return "highwire";
}

namespace {

template <typename E, int N>
std::optional<E> from_string_impl(const std::string& s) {
    for (int i = 0; i < N; ++i) {
        E v = static_cast<E>(i);
        if (s == to_string(v)) return v;
    }
    return std::nullopt;
}

}  // namespace

std::optional<RecordKind> record_kind_from_string(const std::string& s) {
    return from_string_impl<RecordKind, 2>(s);
}
std::optional<StubLinkage> stub_linkage_from_string(const std::string& s) {
    return from_string_impl<StubLinkage, 3>(s);
}
std::optional<Language> language_from_string(const std::string& s) {
    return from_string_impl<Language, kLanguageCount>(s);
}
std::optional<DocType> doc_type_from_string(const std::string& s) {
    return from_string_impl<DocType, 8>(s);
}
std::optional<SourceType> source_type_from_string(const std::string& s) {
    return from_string_impl<SourceType, 6>(s);
}
std::optional<FileKind> file_kind_from_string(const std::string& s) {
    return from_string_impl<FileKind, 4>(s);
}
std::optional<MetaScheme> meta_scheme_from_string(const std::string& s) {
    return from_string_impl<MetaScheme, 5>(s);
}

std::string tld_of(const std::string& domain) {
    auto pos = domain.find_last_of('.');
    if (pos == std::string::npos) return domain;
    return domain.substr(pos + 1);
}

}  // namespace scholarlite
