#include "scholarlite/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "scholarlite/text.hpp"

namespace scholarlite {

using ordered_json = nlohmann::ordered_json;

const char* to_string(EstimationMethod m) {
    switch (m) {
        case EstimationMethod::absurd_query: return "absurd_query";
        case EstimationMethod::year_query: return "year_query";
        case EstimationMethod::domain_sum: return "domain_sum";
        case EstimationMethod::capture_recapture: return "capture_recapture";
        case EstimationMethod::language_proportion: return "language_proportion";
    }
    return "absurd_query";
}

std::optional<EstimationMethod> estimation_method_from_string(const std::string& s) {
    for (int i = 0; i < 5; ++i) {
        const auto m = static_cast<EstimationMethod>(i);
        if (s == to_string(m)) return m;
    }
    return std::nullopt;
}

std::string SizeEstimate::to_json() const {
    ordered_json j;
    j["method"] = scholarlite::to_string(method);
    j["value"] = value;
    if (per_bucket) {
        ordered_json buckets = ordered_json::object();
        for (const auto& [key, count] : *per_bucket) buckets[key] = count;
        j["per_bucket"] = buckets;
    } else {
        j["per_bucket"] = nullptr;
    }
    j["diagnostics"] = diagnostics;
    return j.dump();
}

std::string SizeEstimate::to_csv() const {
    std::ostringstream out;
    out << "bucket,hits\n";
    if (per_bucket) {
        for (const auto& [key, count] : *per_bucket) out << key << ',' << count << '\n';
    }
    out << "total," << value << '\n';
    return out.str();
}

namespace {

// A domain that exists nowhere; excluding it must not change any result.
constexpr const char* kAbsurdDomain = "fsdfsdsdh.info";

SizeEstimate year_sweep(const QueryEngine& engine, std::pair<int, int> years,
                        const EstimateFlags& flags, bool absurd) {
    SizeEstimate est;
    est.method = absurd ? EstimationMethod::absurd_query : EstimationMethod::year_query;
    est.per_bucket.emplace();

    for (int y = years.first; y <= years.second; ++y) {
        Query q;
        q.year_range = {y, y};
        if (absurd) q.site_exclude.push_back(kAbsurdDomain);
        q.include_citations = flags.include_citations;
        q.include_patents = flags.include_patents;
        const std::int64_t hits = engine.hit_count_estimate(q);
        (*est.per_bucket)[std::to_string(y)] = hits;
        est.value += hits;
    }

    // Documents without a publication year never answer a year query.
    Query unrestricted;
    if (absurd) unrestricted.site_exclude.push_back(kAbsurdDomain);
    unrestricted.include_citations = flags.include_citations;
    unrestricted.include_patents = flags.include_patents;
    const std::int64_t total = engine.hit_count_estimate(unrestricted);
    if (total > est.value) {
        est.diagnostics.push_back(
            std::to_string(total - est.value) +
            " documents lack a pub_year (or fall outside the span) and are invisible to year queries");
    }
    return est;
}

}  // namespace

SizeEstimate estimate_absurd(const QueryEngine& engine, std::pair<int, int> years,
                             const EstimateFlags& flags) {
    return year_sweep(engine, years, flags, true);
}

SizeEstimate estimate_year_query(const QueryEngine& engine, std::pair<int, int> years,
                                 const EstimateFlags& flags) {
    return year_sweep(engine, years, flags, false);
}

Result<SizeEstimate> estimate_domain_sum(const QueryEngine& engine,
                                         const std::vector<std::string>& tlds) {
    if (tlds.empty()) return Error{"empty-tld-list", "need at least one TLD"};
    std::set<std::string> seen;
    for (const auto& t : tlds) {
        if (!seen.insert(lowercase_ascii(t)).second) {
            return Error{"duplicate-tld", "duplicate TLD in list: " + t};
        }
    }

    SizeEstimate est;
    est.method = EstimationMethod::domain_sum;
    est.per_bucket.emplace();
    for (const auto& tld : tlds) {
        Query q;
        q.site_include = lowercase_ascii(tld);
        q.include_citations = false;
        q.include_patents = false;
        const std::int64_t hits = engine.hit_count_estimate(q);
        (*est.per_bucket)[lowercase_ascii(tld)] = hits;
        est.value += hits;
    }
    est.diagnostics.push_back(
        "site: queries only count primary versions; records whose primary version "
        "lives outside the TLD list are missed");
    return est;
}

Result<SizeEstimate> estimate_capture_recapture(const std::set<RecordId>& sample_a,
                                                const std::set<RecordId>& sample_b,
                                                const CaptureRecaptureOptions& options) {
    if (sample_a.empty() || sample_b.empty()) {
        return Error{"empty-sample", "both samples must be non-empty"};
    }
    std::int64_t overlap = 0;
    for (const RecordId& id : sample_a) overlap += sample_b.count(id);
    if (overlap == 0) {
        return Error{"no-overlap", "samples are disjoint; the estimator is undefined"};
    }
    const double n1 = static_cast<double>(sample_a.size());
    const double n2 = static_cast<double>(sample_b.size());
    const double m = static_cast<double>(overlap);

    SizeEstimate est;
    est.method = EstimationMethod::capture_recapture;
    double value;
    if (options.chapman_correction) {
        value = (n1 + 1.0) * (n2 + 1.0) / (m + 1.0) - 1.0;
        est.diagnostics.push_back("chapman correction applied");
    } else {
        value = n1 * n2 / m;
    }
    est.value = static_cast<std::int64_t>(std::llround(value));
    est.diagnostics.push_back("overlap m=" + std::to_string(overlap));
    return est;
}

Result<SizeEstimate> estimate_language_proportion(const QueryEngine& engine,
                                                  Language reference_language,
                                                  double known_share) {
    if (!(known_share > 0.0) || known_share > 1.0) {
        return Error{"bad-share", "known_share must be in (0, 1]"};
    }
    Query q;
    q.languages.insert(reference_language);
    q.include_citations = false;
    q.include_patents = false;
    const std::int64_t count = engine.hit_count_estimate(q);
    if (count == 0) {
        return Error{"zero-language-count",
                     std::string("no documents in ") + to_string(reference_language)};
    }
    SizeEstimate est;
    est.method = EstimationMethod::language_proportion;
    est.value = static_cast<std::int64_t>(std::llround(static_cast<double>(count) / known_share));
    est.diagnostics.push_back(std::string("reference language ") + to_string(reference_language) +
                              " count=" + std::to_string(count));
    return est;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = std::min(a.size(), b.size());
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    double mean_a = 0, mean_b = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_a += a[i];
        mean_b += b[i];
    }
    mean_a /= static_cast<double>(n);
    mean_b /= static_cast<double>(n);
    double cov = 0, var_a = 0, var_b = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - mean_a;
        const double db = b[i] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 || var_b == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return cov / std::sqrt(var_a * var_b);
}

Result<CorrelationMatrix> method_correlation(const std::vector<SizeEstimate>& estimates) {
    if (estimates.size() < 2) {
        return Error{"need-two-series", "correlation needs at least two estimates"};
    }
    for (const auto& e : estimates) {
        if (!e.per_bucket) {
            return Error{"missing-buckets",
                         std::string(to_string(e.method)) + " estimate has no per-year buckets"};
        }
    }
    // Shared buckets across every series.
    std::vector<std::string> keys;
    for (const auto& [key, v] : *estimates[0].per_bucket) {
        (void)v;
        bool shared = true;
        for (std::size_t i = 1; i < estimates.size(); ++i) {
            if (estimates[i].per_bucket->count(key) == 0) {
                shared = false;
                break;
            }
        }
        if (shared) keys.push_back(key);
    }
    if (keys.size() < 2) {
        return Error{"need-two-buckets", "fewer than two shared year buckets"};
    }

    CorrelationMatrix matrix;
    std::vector<std::vector<double>> series(estimates.size());
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        matrix.labels.push_back(to_string(estimates[i].method));
        for (const auto& key : keys) {
            series[i].push_back(static_cast<double>(estimates[i].per_bucket->at(key)));
        }
    }
    matrix.values.assign(estimates.size(), std::vector<double>(estimates.size(), 1.0));
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        for (std::size_t j = i + 1; j < estimates.size(); ++j) {
            const double r = pearson(series[i], series[j]);
            matrix.values[i][j] = r;
            matrix.values[j][i] = r;
            if (std::isnan(r)) {
                matrix.diagnostics.push_back("undefined correlation between " + matrix.labels[i] +
                                             " and " + matrix.labels[j] + " (constant series)");
            }
        }
    }
    return matrix;
}

Result<std::int64_t> indexing_speed(const Date& online_date, const Date& indexed_date) {
    const std::int64_t days = days_between(online_date, indexed_date);
    if (days < 0) {
        return Error{"negative-speed", "indexed before online"};
    }
    return days;
}

Result<IndexSpeedRow> indexing_speed_from_ages(std::int64_t online_age,
                                               std::int64_t days_since_index) {
    const std::int64_t days = online_age - days_since_index;
    if (days < 0) {
        return Error{"negative-speed", "indexed before online"};
    }
    IndexSpeedRow row;
    row.days = days;
    row.margin_note = "+/- 2 day margin of error (dates known, hours unknown)";
    return row;
}

Result<double> citation_ratio(const std::vector<ComparisonRow>& rows) {
    long double sum_a = 0, sum_b = 0;
    for (const auto& r : rows) {
        sum_a += static_cast<long double>(r.citations_a);
        sum_b += static_cast<long double>(r.citations_b);
    }
    if (sum_b <= 0) {
        return Error{"zero-denominator", "reference citations sum to zero"};
    }
    return round_half_up(static_cast<double>(sum_a / sum_b), 2);
}

std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

Result<double> spearman(const std::vector<ComparisonRow>& rows) {
    if (rows.size() < 2) return Error{"need-two-rows", "spearman needs at least two rows"};
    std::vector<double> a, b;
    a.reserve(rows.size());
    b.reserve(rows.size());
    for (const auto& r : rows) {
        a.push_back(static_cast<double>(r.citations_a));
        b.push_back(static_cast<double>(r.citations_b));
    }
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    const double rho = pearson(ra, rb);
    if (std::isnan(rho)) {
        return Error{"constant-column", "a column has no variation; rank correlation undefined"};
    }
    return rho;
}

LanguageDistribution language_distribution_from_counts(
    const std::vector<std::pair<std::string, std::int64_t>>& counts) {
    LanguageDistribution dist;
    for (const auto& [label, count] : counts) {
        (void)label;
        dist.total += count;
    }
    for (const auto& [label, count] : counts) {
        DistributionRow row;
        row.label = label;
        row.count = count;
        row.percent = dist.total > 0
                          ? round_half_up(100.0 * static_cast<double>(count) /
                                              static_cast<double>(dist.total),
                                          2)
                          : 0.0;
        dist.rows.push_back(std::move(row));
    }
    return dist;
}

LanguageDistribution language_distribution(const QueryEngine& engine, std::pair<int, int> years) {
    std::vector<std::pair<std::string, std::int64_t>> counts;
    for (int i = 0; i < kLanguageCount; ++i) {
        const auto lang = static_cast<Language>(i);
        std::int64_t sum = 0;
        for (int y = years.first; y <= years.second; ++y) {
            Query q;
            q.languages.insert(lang);
            q.year_range = {y, y};
            q.include_citations = false;
            q.include_patents = false;
            sum += engine.hit_count_estimate(q);
        }
        counts.emplace_back(lang == Language::unknown ? "other" : to_string(lang), sum);
    }
    return language_distribution_from_counts(counts);
}

std::string LanguageDistribution::to_csv() const {
    std::ostringstream out;
    out << "language,documents,percent\n";
    for (const auto& row : rows) {
        char pct[32];
        std::snprintf(pct, sizeof(pct), "%.2f", row.percent);
        out << row.label << ',' << row.count << ',' << pct << '\n';
    }
    out << "total," << total << ",100.00\n";
    return out.str();
}

std::map<DocType, std::int64_t> doc_type_distribution(const std::vector<DocumentRecord>& sample) {
    std::map<DocType, std::int64_t> out;
    for (int i = 0; i < 8; ++i) out[static_cast<DocType>(i)] = 0;
    for (const auto& r : sample) ++out[r.doc_type];
    return out;
}

SizeReport make_size_report(const std::vector<std::pair<std::string, std::int64_t>>& components,
                            std::optional<std::int64_t> published_total) {
    SizeReport report;
    report.components = components;
    for (const auto& [label, value] : components) {
        (void)label;
        report.total += value;
    }
    if (published_total && *published_total != report.total) {
        report.diagnostics.push_back(
            "component sum " + std::to_string(report.total) +
            " disagrees with the published total " + std::to_string(*published_total));
    }
    return report;
}

std::string SizeReport::to_json() const {
    ordered_json j;
    ordered_json comps = ordered_json::object();
    for (const auto& [label, value] : components) comps[label] = value;
    j["components"] = comps;
    j["total"] = total;
    j["diagnostics"] = diagnostics;
    return j.dump();
}

}  // namespace scholarlite
