#include "scholarlite/citation.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "scholarlite/ingest.hpp"
#include "scholarlite/text.hpp"

namespace scholarlite {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// "[12] " or "12. " entry markers.
std::size_t marker_length(const std::string& s) {
    if (s.size() >= 3 && s[0] == '[') {
        std::size_t i = 1;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i > 1 && i < s.size() && s[i] == ']') {
            ++i;
            while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
            return i;
        }
        return 0;
    }
    std::size_t i = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i > 0 && i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        return i;
    }
    return 0;
}

bool looks_like_initials(const std::string& token) {
    // "E.", "J.L.", "J.-L." style clusters.
    bool any_alpha = false;
    for (std::size_t i = 0; i < token.size(); ++i) {
        const unsigned char c = static_cast<unsigned char>(token[i]);
        if (std::isalpha(c)) {
            any_alpha = true;
            if (i + 1 < token.size() && std::isalpha(static_cast<unsigned char>(token[i + 1]))) {
                return false;  // two letters in a row: a real word
            }
        } else if (c != '.' && c != '-') {
            return false;
        }
    }
    return any_alpha && token.find('.') != std::string::npos;
}

std::string strip_punct_edges(std::string s) {
    while (!s.empty() && !std::isalnum(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t b = 0;
    while (b < s.size() && !std::isalnum(static_cast<unsigned char>(s[b]))) ++b;
    return s.substr(b);
}

std::optional<std::string> longest_quoted_span(const std::string& s) {
    static const std::pair<std::string, std::string> quote_pairs[] = {
        {"\"", "\""}, {"“", "”"}, {"'", "'"},
    };
    std::string best;
    for (const auto& [open, close] : quote_pairs) {
        std::size_t pos = 0;
        while (true) {
            auto b = s.find(open, pos);
            if (b == std::string::npos) break;
            auto e = s.find(close, b + open.size());
            if (e == std::string::npos) break;
            const std::string span = trim(s.substr(b + open.size(), e - b - open.size()));
            if (span.size() > best.size()) best = span;
            pos = e + close.size();
        }
    }
    if (best.empty()) return std::nullopt;
    return best;
}

// Sentence segmentation that does not split after initials ("J.L.", "E.").
std::vector<std::string> split_segments(const std::string& s) {
    std::vector<std::string> out;
    std::string current;
    for (std::size_t i = 0; i < s.size(); ++i) {
        current.push_back(s[i]);
        if (s[i] == '.' && i + 1 < s.size() && s[i + 1] == ' ') {
            // Look back at the token ending here; initials keep the segment.
            std::size_t tb = current.find_last_of(' ');
            const std::string token =
                tb == std::string::npos ? current : current.substr(tb + 1);
            if (!looks_like_initials(token)) {
                const std::string seg = trim(current);
                if (!seg.empty()) out.push_back(seg);
                current.clear();
                ++i;  // skip the space
            }
        }
    }
    const std::string seg = trim(current);
    if (!seg.empty()) out.push_back(seg);
    return out;
}

std::string drop_trailing_period(std::string s) {
    while (!s.empty() && (s.back() == '.' || s.back() == ',')) s.pop_back();
    return trim(s);
}

}  // namespace

std::optional<ParsedReference> parse_reference(const std::string& text, int current_year) {
    std::string s = trim(text);
    s = s.substr(marker_length(s));
    if (s.empty()) return std::nullopt;

    ParsedReference ref;
    ref.year = first_year_token(s, current_year + 1);

    // First author surname: leading tokens before a comma, colon, or the
    // year parenthetical, skipping initial clusters.
    {
        std::size_t cut = s.size();
        for (char c : {',', ':', '('}) {
            auto pos = s.find(c);
            if (pos != std::string::npos) cut = std::min(cut, pos);
        }
        const std::string head = trim(s.substr(0, cut));
        std::string surname;
        std::size_t pos = 0;
        while (pos < head.size()) {
            auto space = head.find(' ', pos);
            if (space == std::string::npos) space = head.size();
            const std::string token = strip_punct_edges(head.substr(pos, space - pos));
            if (!token.empty() && !looks_like_initials(head.substr(pos, space - pos)) &&
                !std::isdigit(static_cast<unsigned char>(token[0]))) {
                surname = token;  // last plain word before the cut wins
            }
            pos = space + 1;
        }
        if (!surname.empty()) ref.first_author_surname = surname;
    }

    // Title: a quoted span wins; else the first segment after the year
    // parenthetical ("Author, I. (1964). Title. Venue."); else mid-segment
    // heuristics.
    if (auto quoted = longest_quoted_span(s)) {
        ref.title = *quoted;
    } else {
        std::string best;
        std::optional<std::string> after_year;
        if (ref.year) {
            const std::string pat = "(" + std::to_string(*ref.year) + ")";
            auto pos = s.find(pat);
            if (pos != std::string::npos) {
                std::string tail = s.substr(pos + pat.size());
                while (!tail.empty() && (tail.front() == '.' || tail.front() == ',' ||
                                         tail.front() == ' ')) {
                    tail.erase(tail.begin());
                }
                if (!tail.empty()) after_year = tail;
            }
        }
        if (after_year) {
            auto segments = split_segments(*after_year);
            if (!segments.empty()) best = segments.front();
        } else {
            auto segments = split_segments(s);
            if (segments.size() >= 2) {
                // Skip the author head; prefer interior segments over the
                // trailing venue segment when there are three or more.
                const std::size_t to =
                    segments.size() >= 3 ? segments.size() - 1 : segments.size();
                for (std::size_t i = 1; i < to; ++i) {
                    if (segments[i].size() > best.size()) best = segments[i];
                }
            } else if (segments.size() == 1) {
                // "Author: Title ..." shape.
                auto colon = segments[0].find(':');
                if (colon != std::string::npos) best = trim(segments[0].substr(colon + 1));
            }
        }
        best = drop_trailing_period(best);
        if (!best.empty()) ref.title = best;
    }

    if (!ref.year && !ref.title) return std::nullopt;
    return ref;
}

std::optional<RecordId> match_reference(const ParsedReference& ref, const CorpusStore& store,
                                        const MatchConfig& config) {
    const std::string norm_title = normalize_text(ref.title ? *ref.title : std::string{});
    std::optional<std::string> norm_surname;
    if (ref.first_author_surname) norm_surname = normalize_text(*ref.first_author_surname);

    std::optional<RecordId> best;
    double best_sim = -1.0;
    std::int64_t best_cites = -1;

    store.for_each([&](const DocumentRecord& record) {
        // Year gate: both present within tolerance, or both absent.
        if (ref.year && record.pub_year) {
            if (std::abs(*ref.year - *record.pub_year) > config.year_tolerance) return;
        } else if (ref.year || record.pub_year) {
            return;
        }
        if (norm_surname) {
            if (record.authors.empty()) return;
            if (normalize_text(record.authors.front().surname) != *norm_surname) return;
        }
        const std::string norm_rec = normalize_text(record.title);
        double sim;
        const std::size_t longest = std::max(norm_title.size(), norm_rec.size());
        if (longest == 0) {
            sim = 1.0;
        } else {
            // dist >= length gap, so prune before paying for the DP
            const std::size_t gap = longest - std::min(norm_title.size(), norm_rec.size());
            if (1.0 - static_cast<double>(gap) / static_cast<double>(longest) <
                config.title_similarity_threshold) {
                return;
            }
            sim = 1.0 - static_cast<double>(edit_distance(norm_title, norm_rec)) /
                            static_cast<double>(longest);
        }
        if (sim < config.title_similarity_threshold) return;
        const auto cites = static_cast<std::int64_t>(record.cited_by.size());
        if (sim > best_sim || (sim == best_sim && cites > best_cites) ||
            (sim == best_sim && cites == best_cites && best && record.record_id < *best)) {
            best = record.record_id;
            best_sim = sim;
            best_cites = cites;
        }
    });
    return best;
}

Result<CitationOutcome> record_citation(const RecordId& citing, const std::string& reference_text,
                                        CorpusStore& store, const MatchConfig& config) {
    auto citer = store.get_record(citing);
    if (!citer) return Error{"not_found", "citing record does not exist: " + citing};
    if (citer->kind == RecordKind::citation_stub) {
        return Error{"stub-cannot-cite", "stubs have no parsed full text"};
    }

    auto parsed = parse_reference(reference_text, store.current_year());
    ParsedReference ref = parsed.value_or(ParsedReference{});

    std::optional<RecordId> target;
    if (ref.title || (ref.first_author_surname && ref.year)) {
        target = match_reference(ref, store, config);
    }

    CitationOutcome outcome;
    if (target) {
        outcome.cited = *target;
        outcome.created_stub = false;
    } else {
        DocumentRecord stub;
        stub.kind = RecordKind::citation_stub;
        stub.stub_linkage = StubLinkage::unlinked;
        stub.title = ref.title ? *ref.title : trim(reference_text);
        if (ref.first_author_surname) {
            AuthorName a;
            a.surname = *ref.first_author_surname;
            stub.authors.push_back(a);
        }
        stub.pub_year = ref.year;
        stub.indexed_at = citer->indexed_at;
        auto up = store.upsert_record(std::move(stub));
        if (!up.ok()) return up.error();
        outcome.cited = std::move(up).value();
        outcome.created_stub = true;
    }
    store.add_citation(citing, outcome.cited);
    return outcome;
}

std::int64_t link_all_references(CorpusStore& store, const MatchConfig& config) {
    // Snapshot ids first: linking creates stubs while we walk.
    std::vector<RecordId> ids = store.all_ids();
    std::int64_t processed = 0;
    for (const RecordId& id : ids) {
        auto record = store.get_record(id);
        if (!record || record->kind != RecordKind::full) continue;
        for (const std::string& ref : record->raw_references) {
            auto res = record_citation(id, ref, store, config);
            (void)res;
            ++processed;
        }
    }
    return processed;
}

RecordId select_primary(const std::vector<DocumentRecord>& members) {
    auto rank_of = [](SourceType t) -> int {
        switch (t) {
            case SourceType::publisher: return 0;
            case SourceType::database: return 1;
            case SourceType::repository: return 2;
            case SourceType::university: return 3;
            case SourceType::other: return 3;
            case SourceType::social: return 4;
        }
        return 3;
    };

    const DocumentRecord* best = nullptr;
    int best_rank = 0;
    std::string best_url;
    for (const auto& m : members) {
        int rank = 99;
        std::string url;
        for (const auto& v : m.versions) {
            const int r = rank_of(v.source_type);
            if (r < rank || (r == rank && v.url < url)) {
                rank = r;
                url = v.url;
            }
        }
        if (!best || rank < best_rank || (rank == best_rank && url < best_url) ||
            (rank == best_rank && url == best_url && m.record_id < best->record_id)) {
            best = &m;
            best_rank = rank;
            best_url = url;
        }
    }
    return best ? best->record_id : RecordId{};
}

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

std::vector<VersionGroup> detect_versions(const CorpusStore& store, const MatchConfig& config) {
    // Same pub_year and same first-author surname are hard requirements, so
    // bucket on those before paying for pairwise similarity.
    std::vector<DocumentRecord> fulls;
    std::vector<DocumentRecord> stubs;
    store.for_each([&](const DocumentRecord& r) {
        if (r.kind == RecordKind::full) {
            fulls.push_back(r);
        } else {
            stubs.push_back(r);
        }
    });
    std::sort(fulls.begin(), fulls.end(),
              [](const DocumentRecord& a, const DocumentRecord& b) {
                  return a.record_id < b.record_id;
              });
    std::sort(stubs.begin(), stubs.end(),
              [](const DocumentRecord& a, const DocumentRecord& b) {
                  return a.record_id < b.record_id;
              });

    auto bucket_key = [](const DocumentRecord& r) -> std::optional<std::pair<int, std::string>> {
        if (!r.pub_year || r.authors.empty()) return std::nullopt;
        return std::make_pair(*r.pub_year, normalize_text(r.authors.front().surname));
    };

    std::map<std::pair<int, std::string>, std::vector<std::size_t>> buckets;
    for (std::size_t i = 0; i < fulls.size(); ++i) {
        if (auto key = bucket_key(fulls[i])) buckets[*key].push_back(i);
    }

    UnionFind uf(fulls.size());
    for (const auto& [key, idxs] : buckets) {
        (void)key;
        for (std::size_t a = 0; a < idxs.size(); ++a) {
            for (std::size_t b = a + 1; b < idxs.size(); ++b) {
                if (uf.find(idxs[a]) == uf.find(idxs[b])) continue;
                if (title_similarity(fulls[idxs[a]].title, fulls[idxs[b]].title) >=
                    config.title_similarity_threshold) {
                    uf.unite(idxs[a], idxs[b]);
                }
            }
        }
    }

    std::map<std::size_t, std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < fulls.size(); ++i) clusters[uf.find(i)].push_back(i);

    // Absorb stubs into an existing cluster when their parsed fields line up.
    std::map<std::size_t, std::vector<RecordId>> absorbed;
    for (const auto& stub : stubs) {
        auto key = bucket_key(stub);
        if (!key) continue;
        auto bit = buckets.find(*key);
        if (bit == buckets.end()) continue;
        double best_sim = 0.0;
        std::optional<std::size_t> best_root;
        for (std::size_t idx : bit->second) {
            const double sim = title_similarity(stub.title, fulls[idx].title);
            if (sim >= config.title_similarity_threshold && sim > best_sim) {
                best_sim = sim;
                best_root = uf.find(idx);
            }
        }
        if (best_root) absorbed[*best_root].push_back(stub.record_id);
    }

    std::vector<VersionGroup> groups;
    for (const auto& [root, members] : clusters) {
        const auto& extra = absorbed.count(root) ? absorbed.at(root) : std::vector<RecordId>{};
        if (members.size() + extra.size() < 2) continue;
        VersionGroup g;
        std::vector<DocumentRecord> member_records;
        for (std::size_t idx : members) {
            g.member_ids.push_back(fulls[idx].record_id);
            member_records.push_back(fulls[idx]);
        }
        for (const RecordId& id : extra) g.member_ids.push_back(id);
        std::sort(g.member_ids.begin(), g.member_ids.end());
        g.chosen_primary = select_primary(member_records);
        groups.push_back(std::move(g));
    }
    return groups;
}

Result<RecordId> merge_versions(const VersionGroup& group, CorpusStore& store) {
    if (group.member_ids.size() < 2) {
        return Error{"stale-group", "version group needs at least two members"};
    }
    std::vector<DocumentRecord> members;
    for (const RecordId& id : group.member_ids) {
        if (!store.exists(id)) {
            return Error{"stale-group", "member already retired: " + id};
        }
        members.push_back(*store.get_record(id));
    }
    if (std::find(group.member_ids.begin(), group.member_ids.end(), group.chosen_primary) ==
        group.member_ids.end()) {
        return Error{"stale-group", "chosen primary is not a member"};
    }

    DocumentRecord survivor = *store.get_record(group.chosen_primary);

    // Union of versions, survivor's first so its primary index stays valid.
    std::set<std::pair<std::string, std::string>> seen;
    std::vector<VersionRef> versions;
    for (const auto& v : survivor.versions) {
        if (seen.insert({v.source_domain, v.url}).second) versions.push_back(v);
    }
    for (const auto& m : members) {
        if (m.record_id == survivor.record_id) continue;
        for (const auto& v : m.versions) {
            if (seen.insert({v.source_domain, v.url}).second) versions.push_back(v);
        }
    }
    survivor.versions = std::move(versions);

    // Union of citing sets: duplicate citers collapse, which is exactly the
    // split-citation repair.
    for (const auto& m : members) {
        if (m.record_id == survivor.record_id) continue;
        for (const RecordId& citer : m.cited_by) survivor.cited_by.insert(citer);
        for (const auto& ref : m.raw_references) {
            if (std::find(survivor.raw_references.begin(), survivor.raw_references.end(), ref) ==
                survivor.raw_references.end()) {
                survivor.raw_references.push_back(ref);
            }
        }
        if (!survivor.pub_year && m.pub_year) survivor.pub_year = m.pub_year;
        if (!survivor.abstract && m.abstract) survivor.abstract = m.abstract;
        if (survivor.source_name.empty()) survivor.source_name = m.source_name;
        if (survivor.language == Language::unknown) survivor.language = m.language;
        if (survivor.doc_type == DocType::unknown) survivor.doc_type = m.doc_type;
        if (survivor.indexed_at.serial() > m.indexed_at.serial() && m.indexed_at.year != 0) {
            survivor.indexed_at = m.indexed_at;  // first sighting wins
        }
    }
    // Members citing each other would become self-links; drop them.
    for (const auto& m : members) survivor.cited_by.erase(m.record_id);
    survivor.cited_by.erase(survivor.record_id);

    // Re-select the primary version across the merged set.
    auto rank_of = [](SourceType t) -> int {
        switch (t) {
            case SourceType::publisher: return 0;
            case SourceType::database: return 1;
            case SourceType::repository: return 2;
            case SourceType::university: return 3;
            case SourceType::other: return 3;
            case SourceType::social: return 4;
        }
        return 3;
    };
    std::size_t primary = 0;
    for (std::size_t i = 1; i < survivor.versions.size(); ++i) {
        const auto& cur = survivor.versions[i];
        const auto& best = survivor.versions[primary];
        if (rank_of(cur.source_type) < rank_of(best.source_type) ||
            (rank_of(cur.source_type) == rank_of(best.source_type) && cur.url < best.url)) {
            primary = i;
        }
    }
    survivor.primary_version = primary;

    auto up = store.upsert_record(survivor);
    if (!up.ok()) return up.error();

    for (const auto& m : members) {
        if (m.record_id == survivor.record_id) continue;
        store.retire_into(m.record_id, survivor.record_id);
    }
    return survivor.record_id;
}

Result<std::int64_t> citation_count(const RecordId& id, const CorpusStore& store,
                                    std::optional<std::pair<int, int>> window) {
    auto record = store.get_record(id);
    if (!record) return Error{"not_found", "unknown record: " + id};
    if (!window) return static_cast<std::int64_t>(record->cited_by.size());
    std::int64_t n = 0;
    for (const RecordId& citer : record->cited_by) {
        auto citing = store.get_record(citer);
        if (!citing || !citing->pub_year) continue;
        if (*citing->pub_year >= window->first && *citing->pub_year <= window->second) ++n;
    }
    return n;
}

std::int64_t merge_all_versions(CorpusStore& store, const MatchConfig& config) {
    std::int64_t merges = 0;
    // One pass covers transitive groups; iterate until stable since merged
    // metadata (filled-in year, surname) can enable a new grouping.
    for (int round = 0; round < 8; ++round) {
        auto groups = detect_versions(store, config);
        if (groups.empty()) break;
        std::int64_t done = 0;
        for (const auto& g : groups) {
            auto res = merge_versions(g, store);
            if (res.ok()) ++done;
        }
        merges += done;
        if (done == 0) break;
    }
    return merges;
}

}  // namespace scholarlite
