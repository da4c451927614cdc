#include "scholarlite/store.hpp"

#include <charconv>
#include <fstream>
#include <mutex>
#include <sstream>

#include <json.hpp>

namespace scholarlite {

using ordered_json = nlohmann::ordered_json;

CorpusStore::CorpusStore(int current_year) : current_year_(current_year) {}

Result<void> CorpusStore::validate(const DocumentRecord& r) const {
    if (r.kind == RecordKind::citation_stub) {
        if (!r.versions.empty() || r.primary_version.has_value()) {
            return Error{"stub-has-versions", "citation stubs carry no versions"};
        }
        if (r.stub_linkage == StubLinkage::not_applicable) {
            return Error{"stub-missing-fields", "stub_linkage must be linked or unlinked"};
        }
        if (r.stub_linkage == StubLinkage::linked && r.title.empty()) {
            return Error{"stub-missing-fields", "linked stubs need minimal bibliographic fields"};
        }
    } else {
        if (!r.primary_version.has_value() || *r.primary_version >= r.versions.size()) {
            return Error{"missing-primary-version", "full records need exactly one primary version"};
        }
        if (r.stub_linkage != StubLinkage::not_applicable) {
            return Error{"stub-missing-fields", "full records use stub_linkage=not_applicable"};
        }
    }
    if (!r.record_id.empty() && r.cited_by.count(r.record_id) > 0) {
        return Error{"self-citation", "cited_by must not contain the record itself"};
    }
    if (r.pub_year && (*r.pub_year < 1500 || *r.pub_year > current_year_ + 1)) {
        return Error{"year-out-of-range", "pub_year outside [1500, current_year+1]"};
    }
    for (const auto& v : r.versions) {
        if (v.url.empty()) return Error{"empty-version-url", "version url must be non-empty"};
        if (v.byte_size < 0) return Error{"negative-byte-size", "version byte_size must be >= 0"};
    }
    for (const auto& a : r.authors) {
        if (a.surname.empty()) return Error{"empty-surname", "author surname must be non-empty"};
    }
    return {};
}

RecordId CorpusStore::assign_id_locked() {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "r%08llu", static_cast<unsigned long long>(next_id_++));
    return buf;
}

void CorpusStore::index_record_locked(const DocumentRecord& r) {
    for (const auto& v : r.versions) {
        url_index_[{v.source_domain, v.url}] = r.record_id;
    }
}

void CorpusStore::unindex_record_locked(const DocumentRecord& r) {
    for (const auto& v : r.versions) {
        auto it = url_index_.find({v.source_domain, v.url});
        if (it != url_index_.end() && it->second == r.record_id) url_index_.erase(it);
    }
}

Result<RecordId> CorpusStore::upsert_record(DocumentRecord record) {
    std::unique_lock lock(mutex_);
    if (record.record_id.empty()) record.record_id = assign_id_locked();
    if (auto check = validate(record); !check.ok()) return check.error();

    // Keep assigned ids ahead of any externally supplied "rNNNNNNNN" id.
    if (record.record_id.size() == 9 && record.record_id[0] == 'r') {
        std::uint64_t n = 0;
        auto [p, ec] = std::from_chars(record.record_id.data() + 1,
                                       record.record_id.data() + record.record_id.size(), n);
        if (ec == std::errc() && p == record.record_id.data() + record.record_id.size()) {
            next_id_ = std::max(next_id_, n + 1);
        }
    }

    auto it = records_.find(record.record_id);
    if (it != records_.end()) {
        unindex_record_locked(it->second);
        for (const RecordId& citing : it->second.cited_by) {
            if (record.cited_by.count(citing) == 0) outbound_[citing].erase(record.record_id);
        }
        it->second = record;
    } else {
        records_.emplace(record.record_id, record);
    }
    for (const RecordId& citing : record.cited_by) {
        outbound_[citing].insert(record.record_id);
    }
    index_record_locked(record);
    forwards_.erase(record.record_id);
    return record.record_id;
}

std::optional<DocumentRecord> CorpusStore::get_record(const RecordId& id) const {
    std::shared_lock lock(mutex_);
    RecordId cur = id;
    // Follow merge forwarding; chains are short but be safe about cycles.
    for (int hops = 0; hops < 64; ++hops) {
        auto fit = forwards_.find(cur);
        if (fit == forwards_.end()) break;
        cur = fit->second;
    }
    auto it = records_.find(cur);
    if (it == records_.end()) return std::nullopt;
    return it->second;
}

bool CorpusStore::exists(const RecordId& id) const {
    std::shared_lock lock(mutex_);
    return records_.count(id) > 0;
}

std::optional<RecordId> CorpusStore::resolve(const RecordId& id) const {
    std::shared_lock lock(mutex_);
    RecordId cur = id;
    for (int hops = 0; hops < 64; ++hops) {
        auto fit = forwards_.find(cur);
        if (fit == forwards_.end()) break;
        cur = fit->second;
    }
    if (records_.count(cur) == 0) return std::nullopt;
    return cur;
}

std::int64_t CorpusStore::count_records(const RecordFilter& filter) const {
    std::shared_lock lock(mutex_);
    std::int64_t n = 0;
    for (const auto& [id, r] : records_) {
        (void)id;
        if (filter.kind && r.kind != *filter.kind) continue;
        if (filter.year_range) {
            if (!r.pub_year) continue;
            if (*r.pub_year < filter.year_range->first || *r.pub_year > filter.year_range->second)
                continue;
        }
        if (filter.language && r.language != *filter.language) continue;
        ++n;
    }
    return n;
}

bool CorpusStore::remove_record(const RecordId& id) {
    std::unique_lock lock(mutex_);
    auto it = records_.find(id);
    if (it == records_.end()) return false;

    // Retract the citations this record provided.
    auto out = outbound_.find(id);
    if (out != outbound_.end()) {
        for (const RecordId& cited : out->second) {
            auto cit = records_.find(cited);
            if (cit != records_.end()) cit->second.cited_by.erase(id);
        }
        outbound_.erase(out);
    }
    // Drop inbound bookkeeping pointing at the removed record.
    for (auto& [citing, cited_set] : outbound_) {
        (void)citing;
        cited_set.erase(id);
    }

    unindex_record_locked(it->second);
    records_.erase(it);
    forwards_.erase(id);
    return true;
}

bool CorpusStore::add_citation(const RecordId& citing, const RecordId& cited) {
    std::unique_lock lock(mutex_);
    if (citing == cited) return false;
    auto it = records_.find(cited);
    if (it == records_.end()) return false;
    const bool fresh = it->second.cited_by.insert(citing).second;
    outbound_[citing].insert(cited);
    return fresh;
}

void CorpusStore::retire_into(const RecordId& retired, const RecordId& survivor) {
    std::unique_lock lock(mutex_);
    if (retired == survivor) return;
    auto it = records_.find(retired);
    if (it != records_.end()) {
        unindex_record_locked(it->second);
        // Point the retired record's urls at the survivor.
        for (const auto& v : it->second.versions) {
            url_index_[{v.source_domain, v.url}] = survivor;
        }
        records_.erase(it);
    }
    forwards_[retired] = survivor;
    // Collapse the retired id everywhere it appears as a citer.
    for (auto& [id, rec] : records_) {
        if (rec.cited_by.erase(retired) > 0 && id != survivor) {
            rec.cited_by.insert(survivor);
        }
    }
    auto out = outbound_.find(retired);
    if (out != outbound_.end()) {
        auto edges = out->second;
        outbound_.erase(out);
        for (const RecordId& cited : edges) {
            if (cited != survivor) outbound_[survivor].insert(cited);
        }
    }
    for (auto& [citing, cited_set] : outbound_) {
        (void)citing;
        if (cited_set.erase(retired) > 0) cited_set.insert(survivor);
    }
    outbound_[survivor].erase(survivor);
}

std::vector<DocumentRecord> CorpusStore::all_records() const {
    std::shared_lock lock(mutex_);
    std::vector<DocumentRecord> out;
    out.reserve(records_.size());
    for (const auto& [id, r] : records_) {
        (void)id;
        out.push_back(r);
    }
    return out;
}

std::vector<RecordId> CorpusStore::all_ids() const {
    std::shared_lock lock(mutex_);
    std::vector<RecordId> out;
    out.reserve(records_.size());
    for (const auto& [id, r] : records_) {
        (void)r;
        out.push_back(id);
    }
    return out;
}

std::size_t CorpusStore::size() const {
    std::shared_lock lock(mutex_);
    return records_.size();
}

void CorpusStore::for_each(const std::function<void(const DocumentRecord&)>& fn) const {
    std::shared_lock lock(mutex_);
    for (const auto& [id, r] : records_) {
        (void)id;
        fn(r);
    }
}

std::optional<RecordId> CorpusStore::find_by_url(const std::string& domain,
                                                 const std::string& url) const {
    std::shared_lock lock(mutex_);
    auto it = url_index_.find({domain, url});
    if (it == url_index_.end()) return std::nullopt;
    if (records_.count(it->second) == 0) return std::nullopt;
    return it->second;
}

std::vector<std::pair<std::string, RecordId>> CorpusStore::urls_for_domain(
    const std::string& domain) const {
    std::shared_lock lock(mutex_);
    std::vector<std::pair<std::string, RecordId>> out;
    for (const auto& [key, id] : url_index_) {
        if (key.first == domain && records_.count(id) > 0) out.emplace_back(key.second, id);
    }
    return out;
}

std::optional<Date> CorpusStore::last_snapshot_date(const std::string& domain) const {
    std::shared_lock lock(mutex_);
    auto it = snapshot_dates_.find(domain);
    if (it == snapshot_dates_.end()) return std::nullopt;
    return it->second;
}

void CorpusStore::set_last_snapshot_date(const std::string& domain, const Date& date) {
    std::unique_lock lock(mutex_);
    snapshot_dates_[domain] = date;
}

namespace {

ordered_json author_to_json(const AuthorName& a) {
    ordered_json j;
    j["surname"] = a.surname;
    j["given_initials"] = a.given_initials;
    j["full_given"] = a.full_given ? ordered_json(*a.full_given) : ordered_json(nullptr);
    return j;
}

ordered_json version_to_json(const VersionRef& v) {
    ordered_json j;
    j["url"] = v.url;
    j["source_domain"] = v.source_domain;
    j["source_type"] = to_string(v.source_type);
    j["byte_size"] = v.byte_size;
    j["has_searchable_text"] = v.has_searchable_text;
    j["file_kind"] = to_string(v.file_kind);
    return j;
}

}  // namespace

std::string CorpusStore::record_to_json_line(const DocumentRecord& r) {
    ordered_json j;
    j["record_id"] = r.record_id;
    j["kind"] = to_string(r.kind);
    j["stub_linkage"] = to_string(r.stub_linkage);
    j["title"] = r.title;
    ordered_json authors = ordered_json::array();
    for (const auto& a : r.authors) authors.push_back(author_to_json(a));
    j["authors"] = authors;
    j["pub_year"] = r.pub_year ? ordered_json(*r.pub_year) : ordered_json(nullptr);
    j["source_name"] = r.source_name;
    j["language"] = to_string(r.language);
    j["doc_type"] = to_string(r.doc_type);
    ordered_json versions = ordered_json::array();
    for (const auto& v : r.versions) versions.push_back(version_to_json(v));
    j["versions"] = versions;
    j["primary_version"] =
        r.primary_version ? ordered_json(*r.primary_version) : ordered_json(nullptr);
    j["abstract"] = r.abstract ? ordered_json(*r.abstract) : ordered_json(nullptr);
    j["raw_references"] = r.raw_references;
    j["cited_by"] = std::vector<std::string>(r.cited_by.begin(), r.cited_by.end());
    j["indexed_at"] = r.indexed_at.to_iso();
    j["online_at"] = r.online_at ? ordered_json(r.online_at->to_iso()) : ordered_json(nullptr);
    return j.dump();
}

Result<DocumentRecord> CorpusStore::record_from_json_line(const std::string& line) {
    ordered_json j = ordered_json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        return Error{"bad-record-line", "not a JSON object"};
    }
    try {
        DocumentRecord r;
        r.record_id = j.at("record_id").get<std::string>();
        r.kind = record_kind_from_string(j.at("kind").get<std::string>()).value();
        r.stub_linkage = stub_linkage_from_string(j.at("stub_linkage").get<std::string>()).value();
        r.title = j.at("title").get<std::string>();
        for (const auto& a : j.at("authors")) {
            AuthorName name;
            name.surname = a.at("surname").get<std::string>();
            name.given_initials = a.at("given_initials").get<std::string>();
            if (!a.at("full_given").is_null()) name.full_given = a.at("full_given").get<std::string>();
            r.authors.push_back(std::move(name));
        }
        if (!j.at("pub_year").is_null()) r.pub_year = j.at("pub_year").get<int>();
        r.source_name = j.at("source_name").get<std::string>();
        r.language = language_from_string(j.at("language").get<std::string>()).value();
        r.doc_type = doc_type_from_string(j.at("doc_type").get<std::string>()).value();
        for (const auto& v : j.at("versions")) {
            VersionRef ver;
            ver.url = v.at("url").get<std::string>();
            ver.source_domain = v.at("source_domain").get<std::string>();
            ver.source_type = source_type_from_string(v.at("source_type").get<std::string>()).value();
            ver.byte_size = v.at("byte_size").get<std::int64_t>();
            ver.has_searchable_text = v.at("has_searchable_text").get<bool>();
            ver.file_kind = file_kind_from_string(v.at("file_kind").get<std::string>()).value();
            r.versions.push_back(std::move(ver));
        }
        if (!j.at("primary_version").is_null())
            r.primary_version = j.at("primary_version").get<std::size_t>();
        if (!j.at("abstract").is_null()) r.abstract = j.at("abstract").get<std::string>();
        r.raw_references = j.at("raw_references").get<std::vector<std::string>>();
        for (const auto& c : j.at("cited_by")) r.cited_by.insert(c.get<std::string>());
        r.indexed_at = Date::from_iso(j.at("indexed_at").get<std::string>()).value();
        if (!j.at("online_at").is_null())
            r.online_at = Date::from_iso(j.at("online_at").get<std::string>()).value();
        return r;
    } catch (const std::exception& e) {
        return Error{"bad-record-line", e.what()};
    }
}

void CorpusStore::serialize(std::ostream& out) const {
    std::shared_lock lock(mutex_);
    for (const auto& [id, r] : records_) {
        (void)id;
        out << record_to_json_line(r) << '\n';
    }
}

Result<std::shared_ptr<CorpusStore>> CorpusStore::deserialize(std::istream& in, int current_year) {
    auto store = std::make_shared<CorpusStore>(current_year);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto rec = record_from_json_line(line);
        if (!rec.ok()) {
            return Error{"bad-record-line",
                         "line " + std::to_string(lineno) + ": " + rec.error().message};
        }
        auto up = store->upsert_record(std::move(rec).value());
        if (!up.ok()) {
            return Error{up.error().code, "line " + std::to_string(lineno) + ": " + up.error().message};
        }
    }
    // Rebuild the per-domain snapshot-date view from indexed_at dates.
    {
        std::unique_lock lock(store->mutex_);
        for (const auto& [id, r] : store->records_) {
            (void)id;
            for (const auto& v : r.versions) {
                auto it = store->snapshot_dates_.find(v.source_domain);
                if (it == store->snapshot_dates_.end() || it->second < r.indexed_at) {
                    store->snapshot_dates_[v.source_domain] = r.indexed_at;
                }
            }
        }
    }
    return store;
}

Result<void> CorpusStore::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) return Error{"io-error", "cannot open for writing: " + path};
    serialize(out);
    if (!out) return Error{"io-error", "write failed: " + path};
    return {};
}

Result<std::shared_ptr<CorpusStore>> CorpusStore::load_file(const std::string& path,
                                                            int current_year) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return Error{"io-error", "cannot open for reading: " + path};
    return deserialize(in, current_year);
}

}  // namespace scholarlite
