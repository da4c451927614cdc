#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "scholarlite/error.hpp"
#include "scholarlite/types.hpp"

namespace scholarlite {

/// Canonical record store plus the citation-graph bookkeeping every other
/// module reads and writes through. Concurrent readers are fine; writes are
/// serialized behind a single writer lock. Record ids are assigned, not
/// content-derived, so merges can retire ids explicitly.
class CorpusStore {
public:
    explicit CorpusStore(int current_year = kDefaultCurrentYear);

    static constexpr int kDefaultCurrentYear = 2017;

    int current_year() const { return current_year_; }

    /// Validates invariants and stores the record. A record with an empty
    /// record_id gets a fresh id; an existing id is replaced atomically.
    /// Violations reject with the named invariant ("stub-has-versions",
    /// "missing-primary-version", "self-citation", "year-out-of-range",
    /// "stub-missing-fields", "empty-version-url", "negative-byte-size").
    Result<RecordId> upsert_record(DocumentRecord record);

    /// Most recent upserted state; ids retired by a merge resolve to the
    /// surviving record. Removed or never-seen ids yield nullopt.
    std::optional<DocumentRecord> get_record(const RecordId& id) const;

    bool exists(const RecordId& id) const;

    /// Canonical id after merge forwarding; nullopt for removed/unknown ids.
    std::optional<RecordId> resolve(const RecordId& id) const;

    /// Exact count of live records matching the filter. This is the ground
    /// truth the hit-count estimate wraps.
    std::int64_t count_records(const RecordFilter& filter = {}) const;

    /// Removes a record outright (the vanished-document rule) and retracts
    /// every citation it provided to other records.
    bool remove_record(const RecordId& id);

    /// Adds `citing` to `cited`'s cited_by set. Returns true when the edge
    /// is new. Self-links are ignored.
    bool add_citation(const RecordId& citing, const RecordId& cited);

    /// Retires `retired` in favor of `survivor`: forwards lookups, rewrites
    /// every cited_by set that mentions the retired id, and drops the record.
    void retire_into(const RecordId& retired, const RecordId& survivor);

    /// Stable snapshot of all live records, ordered by record id.
    std::vector<DocumentRecord> all_records() const;
    std::vector<RecordId> all_ids() const;
    std::size_t size() const;

    void for_each(const std::function<void(const DocumentRecord&)>& fn) const;

    // --- ingestion support ------------------------------------------------

    std::optional<RecordId> find_by_url(const std::string& domain, const std::string& url) const;
    std::vector<std::pair<std::string, RecordId>> urls_for_domain(const std::string& domain) const;
    std::optional<Date> last_snapshot_date(const std::string& domain) const;
    void set_last_snapshot_date(const std::string& domain, const Date& date);

    // --- persistence (line-delimited records, UTF-8, ISO dates) ------------

    void serialize(std::ostream& out) const;
    static Result<std::shared_ptr<CorpusStore>> deserialize(std::istream& in, int current_year = kDefaultCurrentYear);

    Result<void> save_file(const std::string& path) const;
    static Result<std::shared_ptr<CorpusStore>> load_file(const std::string& path,
                                                          int current_year = kDefaultCurrentYear);

    static std::string record_to_json_line(const DocumentRecord& record);
    static Result<DocumentRecord> record_from_json_line(const std::string& line);

private:
    Result<void> validate(const DocumentRecord& record) const;
    RecordId assign_id_locked();
    void index_record_locked(const DocumentRecord& record);
    void unindex_record_locked(const DocumentRecord& record);

    mutable std::shared_mutex mutex_;
    int current_year_;
    std::uint64_t next_id_ = 1;
    std::map<RecordId, DocumentRecord> records_;
    std::map<RecordId, RecordId> forwards_;                       // retired -> survivor
    std::map<std::pair<std::string, std::string>, RecordId> url_index_;  // (domain, url)
    std::map<RecordId, std::set<RecordId>> outbound_;             // citing -> cited (derived)
    std::map<std::string, Date> snapshot_dates_;
};

}  // namespace scholarlite
