#include "scholarlite/bibliometrics.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "scholarlite/text.hpp"

namespace scholarlite {

namespace {

std::string normalize_initials(const std::string& initials) {
    std::string out;
    for (char c : initials) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    return out;
}

bool counts_as_citer(const std::optional<DocumentRecord>& citer, const IndicatorOptions& options) {
    if (!citer) return false;
    if (!options.stubs_count_as_citers && citer->kind == RecordKind::citation_stub) return false;
    return true;
}

}  // namespace

Result<int> h_index(const std::vector<std::int64_t>& counts) {
    for (auto c : counts) {
        if (c < 0) return Error{"negative-count", "citation counts must be >= 0"};
    }
    std::vector<std::int64_t> sorted = counts;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    int h = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] >= static_cast<std::int64_t>(i + 1)) {
            h = static_cast<int>(i + 1);
        } else {
            break;
        }
    }
    return h;
}

Result<H5Summary> h5_from_counts(const std::vector<std::int64_t>& counts) {
    auto h = h_index(counts);
    if (!h.ok()) return h.error();
    H5Summary summary;
    summary.h5 = h.value();
    if (summary.h5 == 0) return summary;
    std::vector<std::int64_t> sorted = counts;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    sorted.resize(static_cast<std::size_t>(summary.h5));
    const std::size_t n = sorted.size();
    if (n % 2 == 1) {
        summary.median = static_cast<double>(sorted[n / 2]);
    } else {
        summary.median =
            (static_cast<double>(sorted[n / 2 - 1]) + static_cast<double>(sorted[n / 2])) / 2.0;
    }
    return summary;
}

Result<int> i10_index(const std::vector<std::int64_t>& counts) {
    int n = 0;
    for (auto c : counts) {
        if (c < 0) return Error{"negative-count", "citation counts must be >= 0"};
        if (c >= 10) ++n;
    }
    return n;
}

std::vector<std::int64_t> windowed_citation_counts(const std::vector<RecordId>& pubs,
                                                   const CorpusStore& store,
                                                   std::pair<int, int> window,
                                                   const IndicatorOptions& options) {
    std::vector<std::int64_t> out;
    out.reserve(pubs.size());
    for (const RecordId& id : pubs) {
        std::int64_t n = 0;
        if (auto record = store.get_record(id)) {
            for (const RecordId& citer_id : record->cited_by) {
                auto citer = store.get_record(citer_id);
                if (!counts_as_citer(citer, options)) continue;
                if (!citer->pub_year) continue;
                if (*citer->pub_year >= window.first && *citer->pub_year <= window.second) ++n;
            }
        }
        out.push_back(n);
    }
    return out;
}

std::vector<std::int64_t> all_time_citation_counts(const std::vector<RecordId>& pubs,
                                                   const CorpusStore& store,
                                                   const IndicatorOptions& options) {
    std::vector<std::int64_t> out;
    out.reserve(pubs.size());
    for (const RecordId& id : pubs) {
        std::int64_t n = 0;
        if (auto record = store.get_record(id)) {
            if (options.stubs_count_as_citers) {
                n = static_cast<std::int64_t>(record->cited_by.size());
            } else {
                for (const RecordId& citer_id : record->cited_by) {
                    if (counts_as_citer(store.get_record(citer_id), options)) ++n;
                }
            }
        }
        out.push_back(n);
    }
    return out;
}

AuthorProfile build_author_profile(const AuthorKey& key, const CorpusStore& store,
                                   int current_year, const IndicatorOptions& options) {
    AuthorProfile profile;
    profile.author_key = key;

    const std::string want_surname = normalize_text(key.surname);
    const std::string want_initials = normalize_initials(key.given_initials);

    store.for_each([&](const DocumentRecord& r) {
        if (r.kind != RecordKind::full) return;
        for (const auto& a : r.authors) {
            if (normalize_text(a.surname) != want_surname) continue;
            // Identity is (surname, initials). An empty query-side initials
            // string matches any variant of the surname.
            if (!want_initials.empty() &&
                normalize_initials(a.given_initials) != want_initials) {
                continue;
            }
            profile.publications.push_back(r.record_id);
            break;
        }
    });
    std::sort(profile.publications.begin(), profile.publications.end());

    const std::pair<int, int> window{current_year - 4, current_year};
    const auto all_counts = all_time_citation_counts(profile.publications, store, options);
    const auto win_counts = windowed_citation_counts(profile.publications, store, window, options);

    for (auto c : all_counts) profile.citations_all += c;
    for (auto c : win_counts) profile.citations_5y += c;
    profile.h_all = h_index(all_counts).value();
    profile.h_5y = h_index(win_counts).value();
    profile.i10_all = i10_index(all_counts).value();
    profile.i10_5y = i10_index(win_counts).value();
    return profile;
}

JournalMetrics h5_metrics(const std::string& source_name, std::pair<int, int> period,
                          const CorpusStore& store, const IndicatorOptions& options) {
    JournalMetrics metrics;
    metrics.source_name = source_name;
    metrics.period = period;

    const std::string want = normalize_text(source_name);
    std::vector<RecordId> articles;
    std::map<Language, std::int64_t> language_freq;
    store.for_each([&](const DocumentRecord& r) {
        if (r.kind != RecordKind::full) return;
        if (!r.pub_year || *r.pub_year < period.first || *r.pub_year > period.second) return;
        if (normalize_text(r.source_name) != want) return;
        articles.push_back(r.record_id);
        ++language_freq[r.language];
    });
    std::sort(articles.begin(), articles.end());
    metrics.n_articles = static_cast<std::int64_t>(articles.size());

    // Journal language: the modal language of its period articles.
    std::int64_t best = 0;
    for (const auto& [lang, freq] : language_freq) {
        if (freq > best) {
            best = freq;
            metrics.language = lang;
        }
    }

    const auto counts = windowed_citation_counts(articles, store, period, options);
    for (auto c : counts) metrics.period_citations += c;
    const auto summary = h5_from_counts(counts).value();
    metrics.h5 = summary.h5;
    metrics.h5_median = summary.median;

    // Core: the h5 top articles by period count; ties at the threshold break
    // by record id.
    std::vector<std::pair<RecordId, std::int64_t>> ranked;
    for (std::size_t i = 0; i < articles.size(); ++i) ranked.emplace_back(articles[i], counts[i]);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    ranked.resize(std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(metrics.h5)));
    metrics.h5_core = std::move(ranked);
    return metrics;
}

bool gsm_inclusion(const JournalMetrics& metrics) {
    return metrics.n_articles >= 100 && metrics.period_citations >= 1;
}

RankingSet gsm_rankings(const CorpusStore& store, int edition_year,
                        const JournalCategoryMap& categories, const IndicatorOptions& options) {
    RankingSet set;
    set.edition_year = edition_year;
    set.period = {edition_year - 5, edition_year - 1};

    // Distinct sources with any article in the period.
    std::set<std::string> names;
    store.for_each([&](const DocumentRecord& r) {
        if (r.kind != RecordKind::full || r.source_name.empty()) return;
        if (!r.pub_year || *r.pub_year < set.period.first || *r.pub_year > set.period.second) return;
        names.insert(r.source_name);
    });

    for (const std::string& name : names) {
        JournalMetrics m = h5_metrics(name, set.period, store, options);
        if (auto it = categories.find(name); it != categories.end()) {
            m.categories = it->second;
        }
        if (gsm_inclusion(m)) set.all_included.push_back(std::move(m));
    }

    auto by_h5 = [](const JournalMetrics& a, const JournalMetrics& b) {
        if (a.h5 != b.h5) return a.h5 > b.h5;
        if (a.h5_median != b.h5_median) return a.h5_median > b.h5_median;
        return a.source_name < b.source_name;
    };
    std::sort(set.all_included.begin(), set.all_included.end(), by_h5);

    for (const JournalMetrics& m : set.all_included) {
        if (m.language == Language::english) {
            for (const std::string& path : m.categories) {
                auto& list = set.per_category[path];
                if (list.size() < 20) list.push_back(m);
            }
        } else if (m.language != Language::unknown) {
            auto& list = set.per_language[m.language];
            if (list.size() < 100) list.push_back(m);
        }
    }
    return set;
}

std::vector<JournalMetrics> gsm_search(const std::string& keyword, const RankingSet& rankings) {
    const std::string needle = normalize_text(keyword);
    std::vector<JournalMetrics> out;
    for (const auto& m : rankings.all_included) {
        if (needle.empty() || normalize_text(m.source_name).find(needle) != std::string::npos) {
            out.push_back(m);
        }
        if (out.size() >= 20) break;  // all_included is already h5-sorted
    }
    return out;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

std::string format_median(double m) {
    char buf[32];
    if (m == static_cast<std::int64_t>(m)) {
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(m));
    } else {
        std::snprintf(buf, sizeof(buf), "%.1f", m);
    }
    return buf;
}

}  // namespace

std::string rankings_to_csv(const RankingSet& rankings) {
    std::ostringstream out;
    out << "rank,source_name,h5,h5_median,language,category\n";
    for (const auto& [lang, list] : rankings.per_language) {
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto& m = list[i];
            out << (i + 1) << ',' << csv_escape(m.source_name) << ',' << m.h5 << ','
                << format_median(m.h5_median) << ',' << to_string(lang) << ",\n";
        }
    }
    for (const auto& [path, list] : rankings.per_category) {
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto& m = list[i];
            out << (i + 1) << ',' << csv_escape(m.source_name) << ',' << m.h5 << ','
                << format_median(m.h5_median) << ',' << to_string(m.language) << ','
                << csv_escape(path) << '\n';
        }
    }
    return out.str();
}

}  // namespace scholarlite
