// scholarlite command-line interface: generate, ingest, query, profile, gsm,
// estimate, compare, report, export. Machine output (JSON/CSV) goes to stdout
// or files under --output-dir; human-readable notes go to stderr.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 estimator-undefined.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "scholarlite/bibliometrics.hpp"
#include "scholarlite/citation.hpp"
#include "scholarlite/estimation.hpp"
#include "scholarlite/ingest.hpp"
#include "scholarlite/query.hpp"
#include "scholarlite/snapshot_io.hpp"
#include "scholarlite/store.hpp"
#include "scholarlite/synth.hpp"
#include "scholarlite/text.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace scholarlite;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitEstimator = 3;

struct RunConfig {
    std::string corpus_path = "corpus.jsonl";
    int current_year = CorpusStore::kDefaultCurrentYear;
    double alpha = 1.0;  // citation weight
    double beta = 0.5;   // language weight
    std::string noise_model = "exact";
    std::string output_dir;
};

std::string trim_copy(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool load_run_config(const std::string& path, RunConfig& config, std::string& error) {
    std::ifstream in(path);
    if (!in) {
        error = "cannot open config file: " + path;
        return false;
    }
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim_copy(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            error = path + ":" + std::to_string(lineno) + ": expected key=value";
            return false;
        }
        const std::string key = trim_copy(t.substr(0, eq));
        const std::string value = trim_copy(t.substr(eq + 1));
        try {
            if (key == "corpus_path") config.corpus_path = value;
            else if (key == "current_year") config.current_year = std::stoi(value);
            else if (key == "alpha") config.alpha = std::stod(value);
            else if (key == "beta") config.beta = std::stod(value);
            else if (key == "noise_model") config.noise_model = value;
            else if (key == "output_dir") config.output_dir = value;
            else {
                error = path + ":" + std::to_string(lineno) + ": unknown key " + key;
                return false;
            }
        } catch (const std::exception&) {
            error = path + ":" + std::to_string(lineno) + ": bad value for " + key;
            return false;
        }
    }
    return true;
}

int fail(int code, const std::string& message) {
    std::cerr << "scholarlite: " << message << "\n";
    return code;
}

int error_exit_code(const Error& err) {
    static const std::set<std::string> estimator_errors = {
        "no-overlap",     "zero-denominator", "constant-column", "negative-speed",
        "zero-language-count", "empty-sample", "bad-share",      "need-two-rows",
        "need-two-series", "need-two-buckets", "duplicate-tld",  "empty-tld-list",
        "missing-buckets",
    };
    return estimator_errors.count(err.code) ? kExitEstimator : kExitData;
}

bool write_file(const std::string& path, const std::string& content, std::string& error) {
    fs::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        error = "cannot write " + path;
        return false;
    }
    out << content;
    return true;
}

// Writes to output_dir when configured, and always echoes to stdout.
bool emit_report(const RunConfig& config, const std::string& filename, const std::string& content,
                 std::string& error) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    if (!config.output_dir.empty()) {
        return write_file((fs::path(config.output_dir) / filename).string(), content, error);
    }
    return true;
}

Result<std::shared_ptr<CorpusStore>> load_corpus(const RunConfig& config) {
    return CorpusStore::load_file(config.corpus_path, config.current_year);
}

std::pair<int, int> default_year_span(const CorpusStore& store) {
    int lo = store.current_year(), hi = 1500;
    bool any = false;
    store.for_each([&](const DocumentRecord& r) {
        if (!r.pub_year) return;
        any = true;
        lo = std::min(lo, *r.pub_year);
        hi = std::max(hi, *r.pub_year);
    });
    if (!any) return {store.current_year(), store.current_year()};
    return {lo, hi};
}

Result<std::pair<int, int>> parse_span(const std::string& spec) {
    const auto dots = spec.find("..");
    try {
        if (dots == std::string::npos) {
            const int y = std::stoi(spec);
            return std::make_pair(y, y);
        }
        const int lo = std::stoi(spec.substr(0, dots));
        const int hi = std::stoi(spec.substr(dots + 2));
        if (lo > hi) return Error{"bad-span", "lo > hi"};
        return std::make_pair(lo, hi);
    } catch (const std::exception&) {
        return Error{"bad-span", "expected lo..hi"};
    }
}

ordered_json ingest_report_json(const IngestReport& r) {
    ordered_json j;
    j["added"] = r.added;
    j["updated"] = r.updated;
    j["removed"] = r.removed;
    j["rejected"] = r.rejected;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scholarlite: a desk-scale academic search engine with an estimation lab"};
    app.require_subcommand(1);

    RunConfig config;
    std::string config_file;
    app.add_option("--config", config_file, "RunConfig file (key=value)");
    auto* corpus_opt = app.add_option("--corpus", config.corpus_path, "corpus file (JSON lines)");
    auto* year_opt = app.add_option("--current-year", config.current_year, "configured current year");
    auto* alpha_opt = app.add_option("--alpha", config.alpha, "relevance citation weight");
    auto* beta_opt = app.add_option("--beta", config.beta, "relevance language weight");
    auto* noise_opt = app.add_option("--noise", config.noise_model, "noise model: exact|rounded:K");
    auto* outdir_opt = app.add_option("--output-dir", config.output_dir, "directory for reports");

    // generate
    auto* cmd_generate = app.add_subcommand("generate", "generate a synthetic corpus with ground truth");
    std::string gen_config_file, gen_out = "generated";
    std::uint64_t gen_seed = 0;
    bool gen_seed_set = false;
    cmd_generate->add_option("--config-file", gen_config_file, "corpus config (key=value)");
    cmd_generate->add_option("--out", gen_out, "output directory");
    cmd_generate->add_option("--seed", gen_seed, "seed override")->each([&](const std::string&) {
        gen_seed_set = true;
    });

    // ingest
    auto* cmd_ingest = app.add_subcommand("ingest", "ingest snapshot directories into the corpus");
    std::string ingest_dir;
    cmd_ingest->add_option("snapshot_dir", ingest_dir, "snapshot directory")->required();

    // query
    auto* cmd_query = app.add_subcommand("query", "run a search query");
    std::string query_string;
    int page_size = 10, page_index = 0;
    std::string sort_order = "relevance";
    std::string lang_filter;
    bool no_citations = false, no_patents = false;
    cmd_query->add_option("query", query_string, "query string");
    cmd_query->add_option("--pagesize", page_size, "10 or 20")->check(CLI::IsMember({10, 20}));
    cmd_query->add_option("--page", page_index, "page index (0-based)");
    cmd_query->add_option("--sort", sort_order, "relevance|date")
        ->check(CLI::IsMember({"relevance", "date"}));
    cmd_query->add_option("--lang", lang_filter, "comma-separated language filter");
    cmd_query->add_flag("--no-citations", no_citations, "drop [CITATION] records");
    cmd_query->add_flag("--no-patents", no_patents, "drop patents");

    // profile
    auto* cmd_profile = app.add_subcommand("profile", "author indicators (both timeframes)");
    std::string author_spec;
    cmd_profile->add_option("author", author_spec, "author as \"Surname, I.\"")->required();

    // gsm
    auto* cmd_gsm = app.add_subcommand("gsm", "journal rankings and metrics");
    int edition_year = 0;
    std::string categories_file, gsm_keyword;
    cmd_gsm->add_option("--edition", edition_year, "edition year Y (period Y-5..Y-1)")->required();
    cmd_gsm->add_option("--categories", categories_file,
                        "JSON file: source_name -> [category paths]");
    cmd_gsm->add_option("--search", gsm_keyword, "keyword search over included journals");

    // estimate
    auto* cmd_estimate = app.add_subcommand("estimate", "size estimators");
    std::string method_name, years_spec, tlds_spec, sample_a_file, sample_b_file, ref_language;
    double known_share = 0.0;
    bool chapman = false, est_no_citations = false, est_no_patents = false;
    cmd_estimate->add_option("method", method_name,
                             "absurd_query|year_query|domain_sum|capture_recapture|language_proportion")
        ->required();
    cmd_estimate->add_option("--years", years_spec, "year span lo..hi");
    cmd_estimate->add_option("--tlds", tlds_spec, "comma-separated TLD list");
    cmd_estimate->add_option("--sample-a", sample_a_file, "record ids, one per line");
    cmd_estimate->add_option("--sample-b", sample_b_file, "record ids, one per line");
    cmd_estimate->add_flag("--chapman", chapman, "Chapman correction");
    cmd_estimate->add_option("--language", ref_language, "reference language");
    cmd_estimate->add_option("--share", known_share, "known share of the reference language");
    cmd_estimate->add_flag("--no-citations", est_no_citations, "exclude [CITATION] records");
    cmd_estimate->add_flag("--no-patents", est_no_patents, "exclude patents");

    // compare
    auto* cmd_compare = app.add_subcommand("compare", "corpus vs reference-database citation data");
    std::string refdb_file;
    double coverage = 1.0, english_bias = 0.0;
    bool journal_only = false;
    std::uint64_t refdb_seed = 1;
    cmd_compare->add_option("--refdb", refdb_file, "reference db CSV (skip generation)");
    cmd_compare->add_option("--coverage", coverage, "keep probability");
    cmd_compare->add_option("--english-bias", english_bias, "extra keep probability for English");
    cmd_compare->add_flag("--journal-only", journal_only, "articles only");
    cmd_compare->add_option("--seed", refdb_seed, "selection seed");

    // report
    auto* cmd_report = app.add_subcommand("report", "formatter-level reports");
    std::string report_kind;
    std::vector<std::string> components;
    std::int64_t published_total = -1;
    std::string counts_file;
    std::int64_t online_age = -1, days_since_index = -1;
    std::string online_date_str, indexed_date_str;
    cmd_report->add_option("kind", report_kind, "size|languages|types|speed")->required();
    cmd_report->add_option("--component", components, "label=value (repeatable)");
    cmd_report->add_option("--published-total", published_total, "published total to check against");
    cmd_report->add_option("--counts", counts_file, "CSV of label,count rows");
    cmd_report->add_option("--years", years_spec, "year span lo..hi");
    cmd_report->add_option("--online-age", online_age, "days the item has been online");
    cmd_report->add_option("--days-since-index", days_since_index, "days since it was indexed");
    cmd_report->add_option("--online", online_date_str, "online date YYYY-MM-DD");
    cmd_report->add_option("--indexed", indexed_date_str, "indexed date YYYY-MM-DD");

    // export
    auto* cmd_export = app.add_subcommand("export", "export records to reference-manager formats");
    std::string export_ids, export_format = "bibtex";
    cmd_export->add_option("--ids", export_ids, "comma-separated record ids")->required();
    cmd_export->add_option("--format", export_format, "bibtex|endnote|refman|refworks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    // Config file, then SCHOLARLITE_CONFIG override, then explicit flags.
    {
        std::string file = config_file;
        if (const char* env = std::getenv("SCHOLARLITE_CONFIG")) {
            if (*env) file = env;
        }
        if (!file.empty()) {
            RunConfig from_file = config;
            std::string error;
            if (!load_run_config(file, from_file, error)) return fail(kExitData, error);
            if (corpus_opt->count() == 0) config.corpus_path = from_file.corpus_path;
            if (year_opt->count() == 0) config.current_year = from_file.current_year;
            if (alpha_opt->count() == 0) config.alpha = from_file.alpha;
            if (beta_opt->count() == 0) config.beta = from_file.beta;
            if (noise_opt->count() == 0) config.noise_model = from_file.noise_model;
            if (outdir_opt->count() == 0) config.output_dir = from_file.output_dir;
        }
    }
    if (config.alpha < 0 || config.beta < 0) {
        return fail(kExitUsage, "relevance weights must be >= 0");
    }
    auto noise = NoiseModel::parse(config.noise_model);
    if (!noise) return fail(kExitUsage, "bad noise model: " + config.noise_model);
    const RelevanceWeights weights{config.alpha, config.beta};

    // ---- generate -----------------------------------------------------------
    if (cmd_generate->parsed()) {
        CorpusConfig corpus_config = CorpusConfig::defaults();
        if (!gen_config_file.empty()) {
            auto parsed = CorpusConfig::parse_file(gen_config_file);
            if (!parsed.ok()) return fail(kExitData, parsed.error().message);
            corpus_config = std::move(parsed).value();
        }
        if (gen_seed_set) corpus_config.seed = gen_seed;

        auto generated = generate_corpus(corpus_config);
        if (!generated.ok()) return fail(kExitData, generated.error().message);
        const auto& corpus = generated.value();

        std::string error;
        for (const auto& snap : corpus.snapshots) {
            const std::string dir = (fs::path(gen_out) / "snapshots" /
                                     (snap.domain + "__" + snap.snapshot_date.to_iso()))
                                        .string();
            auto written = write_snapshot(snap, dir);
            if (!written.ok()) return fail(kExitData, written.error().message);
        }
        if (!write_file((fs::path(gen_out) / "truth.json").string(), corpus.truth.to_json(), error))
            return fail(kExitData, error);
        const auto report = ground_truth_report(corpus.truth);
        if (!write_file((fs::path(gen_out) / "truth_summary.csv").string(), report.summary_csv,
                        error) ||
            !write_file((fs::path(gen_out) / "truth_per_year.csv").string(), report.per_year_csv,
                        error) ||
            !write_file((fs::path(gen_out) / "truth_per_language.csv").string(),
                        report.per_language_csv, error) ||
            !write_file((fs::path(gen_out) / "truth_per_type.csv").string(), report.per_type_csv,
                        error)) {
            return fail(kExitData, error);
        }
        std::cerr << "generated " << corpus.snapshots.size() << " snapshots under " << gen_out
                  << " (true size " << corpus.truth.true_size << ")\n";
        return kExitOk;
    }

    // ---- ingest -------------------------------------------------------------
    if (cmd_ingest->parsed()) {
        auto store = std::make_shared<CorpusStore>(config.current_year);
        if (fs::exists(config.corpus_path)) {
            auto loaded = load_corpus(config);
            if (!loaded.ok()) return fail(kExitData, loaded.error().message);
            store = std::move(loaded).value();
        }
        auto snapshots = read_snapshot_tree(ingest_dir);
        if (!snapshots.ok()) return fail(kExitData, snapshots.error().message);

        IngestReport total;
        for (const auto& snap : snapshots.value()) {
            auto report = ingest_snapshot(snap, *store);
            if (!report.ok()) return fail(kExitData, report.error().message);
            total.added += report.value().added;
            total.updated += report.value().updated;
            total.removed += report.value().removed;
            total.rejected += report.value().rejected;
        }
        const std::int64_t references = link_all_references(*store);
        const std::int64_t merges = merge_all_versions(*store);

        auto saved = store->save_file(config.corpus_path);
        if (!saved.ok()) return fail(kExitData, saved.error().message);

        ordered_json j = ingest_report_json(total);
        j["references_processed"] = references;
        j["merges"] = merges;
        RecordFilter stub_filter;
        stub_filter.kind = RecordKind::citation_stub;
        j["records"] = store->count_records();
        j["stubs"] = store->count_records(stub_filter);
        std::cout << j.dump() << "\n";
        return kExitOk;
    }

    // Everything below needs a corpus on disk.
    auto open_store = [&](std::shared_ptr<CorpusStore>& store) -> int {
        auto loaded = load_corpus(config);
        if (!loaded.ok()) {
            fail(kExitData, loaded.error().message);
            return kExitData;
        }
        store = std::move(loaded).value();
        return kExitOk;
    };

    // ---- query ---------------------------------------------------------------
    if (cmd_query->parsed()) {
        std::shared_ptr<CorpusStore> store;
        if (int rc = open_store(store); rc != kExitOk) return rc;

        auto parsed = parse_query(query_string);
        if (!parsed.ok()) return fail(kExitUsage, parsed.error().message);
        Query query = std::move(parsed).value();
        query.include_citations = !no_citations;
        query.include_patents = !no_patents;
        query.sort = sort_order == "date" ? SortOrder::date : SortOrder::relevance;
        if (!lang_filter.empty()) {
            std::istringstream langs(lang_filter);
            std::string name;
            while (std::getline(langs, name, ',')) {
                auto lang = language_from_string(trim_copy(name));
                if (!lang) return fail(kExitUsage, "unknown language: " + name);
                query.languages.insert(*lang);
            }
        }

        QueryEngine engine(*store, weights, *noise);
        auto page = engine.execute(query, page_index, page_size);
        if (!page.ok()) return fail(kExitUsage, page.error().message);
        for (const RecordId& id : page.value().hits) {
            auto record = store->get_record(id);
            if (!record) continue;
            ordered_json j;
            j["record_id"] = record->record_id;
            j["title"] = record->title;
            j["year"] = record->pub_year ? ordered_json(*record->pub_year) : ordered_json(nullptr);
            j["citations"] = record->cited_by.size();
            j["primary_url"] = record->primary_version
                                   ? ordered_json(record->versions[*record->primary_version].url)
                                   : ordered_json(nullptr);
            std::cout << j.dump() << "\n";
        }
        std::cerr << "hit_count_estimate=" << page.value().hit_count_estimate << "\n";
        return kExitOk;
    }

    // ---- profile --------------------------------------------------------------
    if (cmd_profile->parsed()) {
        std::shared_ptr<CorpusStore> store;
        if (int rc = open_store(store); rc != kExitOk) return rc;

        AuthorKey key;
        const auto comma = author_spec.find(',');
        if (comma == std::string::npos) {
            key.surname = trim_copy(author_spec);
        } else {
            key.surname = trim_copy(author_spec.substr(0, comma));
            key.given_initials = trim_copy(author_spec.substr(comma + 1));
        }
        const AuthorProfile profile = build_author_profile(key, *store, config.current_year);

        ordered_json j;
        j["surname"] = profile.author_key.surname;
        j["given_initials"] = profile.author_key.given_initials;
        j["publications"] = profile.publications;
        j["citations_all"] = profile.citations_all;
        j["citations_5y"] = profile.citations_5y;
        j["h_all"] = profile.h_all;
        j["h_5y"] = profile.h_5y;
        j["i10_all"] = profile.i10_all;
        j["i10_5y"] = profile.i10_5y;
        std::string error;
        if (!emit_report(config, "profile.json", j.dump(2) + "\n", error))
            return fail(kExitData, error);
        return kExitOk;
    }

    // ---- gsm ------------------------------------------------------------------
    if (cmd_gsm->parsed()) {
        std::shared_ptr<CorpusStore> store;
        if (int rc = open_store(store); rc != kExitOk) return rc;

        JournalCategoryMap categories;
        if (!categories_file.empty()) {
            std::ifstream in(categories_file);
            if (!in) return fail(kExitData, "cannot open " + categories_file);
            ordered_json j = ordered_json::parse(in, nullptr, false);
            if (j.is_discarded() || !j.is_object())
                return fail(kExitData, "bad categories file: " + categories_file);
            for (const auto& [name, paths] : j.items()) {
                for (const auto& p : paths) categories[name].push_back(p.get<std::string>());
            }
        }
        const RankingSet rankings = gsm_rankings(*store, edition_year, categories);

        std::string error;
        if (!gsm_keyword.empty()) {
            const auto results = gsm_search(gsm_keyword, rankings);
            std::ostringstream out;
            out << "source_name,h5,h5_median\n";
            for (const auto& m : results) {
                out << m.source_name << ',' << m.h5 << ',' << m.h5_median << '\n';
            }
            if (!emit_report(config, "gsm_search.csv", out.str(), error))
                return fail(kExitData, error);
            return kExitOk;
        }
        if (!emit_report(config, "gsm_rankings.csv", rankings_to_csv(rankings), error))
            return fail(kExitData, error);
        return kExitOk;
    }

    // ---- estimate ---------------------------------------------------------------
    if (cmd_estimate->parsed()) {
        auto method = estimation_method_from_string(method_name);
        if (!method) return fail(kExitUsage, "unknown method: " + method_name);

        std::shared_ptr<CorpusStore> store;
        if (int rc = open_store(store); rc != kExitOk) return rc;
        QueryEngine engine(*store, weights, *noise);

        Result<SizeEstimate> outcome = Error{"unreachable", ""};
        switch (*method) {
            case EstimationMethod::absurd_query:
            case EstimationMethod::year_query: {
                std::pair<int, int> span = default_year_span(*store);
                if (!years_spec.empty()) {
                    auto parsed_span = parse_span(years_spec);
                    if (!parsed_span.ok()) return fail(kExitUsage, parsed_span.error().message);
                    span = parsed_span.value();
                }
                EstimateFlags flags;
                flags.include_citations = !est_no_citations;
                flags.include_patents = !est_no_patents;
                outcome = *method == EstimationMethod::absurd_query
                              ? estimate_absurd(engine, span, flags)
                              : estimate_year_query(engine, span, flags);
                break;
            }
            case EstimationMethod::domain_sum: {
                if (tlds_spec.empty()) return fail(kExitUsage, "domain_sum needs --tlds");
                std::vector<std::string> tlds;
                std::istringstream items(tlds_spec);
                std::string item;
                while (std::getline(items, item, ',')) tlds.push_back(trim_copy(item));
                outcome = estimate_domain_sum(engine, tlds);
                break;
            }
            case EstimationMethod::capture_recapture: {
                if (sample_a_file.empty() || sample_b_file.empty()) {
                    return fail(kExitUsage, "capture_recapture needs --sample-a and --sample-b");
                }
                auto read_sample = [](const std::string& path) -> Result<std::set<RecordId>> {
                    std::ifstream in(path);
                    if (!in) return Error{"io-error", "cannot open " + path};
                    std::set<RecordId> ids;
                    std::string line;
                    while (std::getline(in, line)) {
                        const std::string id = trim_copy(line);
                        if (!id.empty()) ids.insert(id);
                    }
                    return ids;
                };
                auto a = read_sample(sample_a_file);
                if (!a.ok()) return fail(kExitData, a.error().message);
                auto b = read_sample(sample_b_file);
                if (!b.ok()) return fail(kExitData, b.error().message);
                CaptureRecaptureOptions options;
                options.chapman_correction = chapman;
                outcome = estimate_capture_recapture(a.value(), b.value(), options);
                break;
            }
            case EstimationMethod::language_proportion: {
                auto lang = language_from_string(ref_language);
                if (!lang) return fail(kExitUsage, "unknown language: " + ref_language);
                outcome = estimate_language_proportion(engine, *lang, known_share);
                break;
            }
        }
        if (!outcome.ok()) {
            return fail(error_exit_code(outcome.error()),
                        outcome.error().code + ": " + outcome.error().message);
        }
        std::string error;
        if (!config.output_dir.empty()) {
            if (!write_file((fs::path(config.output_dir) / ("estimate_" + method_name + ".csv"))
                                .string(),
                            outcome.value().to_csv(), error)) {
                return fail(kExitData, error);
            }
        }
        if (!emit_report(config, "estimate_" + method_name + ".json",
                         outcome.value().to_json() + "\n", error)) {
            return fail(kExitData, error);
        }
        return kExitOk;
    }

    // ---- compare ------------------------------------------------------------------
    if (cmd_compare->parsed()) {
        std::shared_ptr<CorpusStore> store;
        if (int rc = open_store(store); rc != kExitOk) return rc;

        std::vector<ComparisonRow> rows;
        std::string refdb_csv;
        if (!refdb_file.empty()) {
            std::ifstream in(refdb_file);
            if (!in) return fail(kExitData, "cannot open " + refdb_file);
            std::string line;
            bool header = true;
            while (std::getline(in, line)) {
                if (header) {
                    header = false;
                    continue;
                }
                std::istringstream fields(line);
                ComparisonRow row;
                std::string a, b;
                if (!std::getline(fields, row.record_id, ',') || !std::getline(fields, a, ',') ||
                    !std::getline(fields, b, ',')) {
                    continue;
                }
                try {
                    row.citations_a = std::stoll(a);
                    row.citations_b = std::stoll(b);
                } catch (const std::exception&) {
                    return fail(kExitData, "bad row in " + refdb_file + ": " + line);
                }
                rows.push_back(std::move(row));
            }
        } else {
            ReferenceDbSelectivity selectivity;
            selectivity.journal_only = journal_only;
            selectivity.english_bias = english_bias;
            selectivity.coverage = coverage;
            auto db = generate_reference_db(*store, selectivity, refdb_seed);
            if (!db.ok()) return fail(kExitData, db.error().message);
            rows = db.value().rows;
            refdb_csv = db.value().to_csv();
        }

        auto ratio = citation_ratio(rows);
        auto rho = spearman(rows);
        ordered_json j;
        j["rows"] = rows.size();
        if (ratio.ok()) {
            j["citation_ratio"] = ratio.value();
        } else {
            j["citation_ratio"] = nullptr;
            j["citation_ratio_error"] = ratio.error().code;
        }
        if (rho.ok()) {
            j["spearman"] = rho.value();
        } else {
            j["spearman"] = nullptr;
            j["spearman_error"] = rho.error().code;
        }
        std::string error;
        if (!refdb_csv.empty() && !config.output_dir.empty()) {
            if (!write_file((fs::path(config.output_dir) / "refdb.csv").string(), refdb_csv, error))
                return fail(kExitData, error);
        }
        if (!emit_report(config, "comparison.json", j.dump(2) + "\n", error))
            return fail(kExitData, error);
        if (!ratio.ok()) return fail(error_exit_code(ratio.error()), ratio.error().message);
        if (!rho.ok()) return fail(error_exit_code(rho.error()), rho.error().message);
        return kExitOk;
    }

    // ---- report --------------------------------------------------------------------
    if (cmd_report->parsed()) {
        std::string error;
        if (report_kind == "size") {
            std::vector<std::pair<std::string, std::int64_t>> parsed_components;
            for (const auto& c : components) {
                const auto eq = c.find('=');
                if (eq == std::string::npos) return fail(kExitUsage, "--component needs label=value");
                try {
                    parsed_components.emplace_back(c.substr(0, eq), std::stoll(c.substr(eq + 1)));
                } catch (const std::exception&) {
                    return fail(kExitUsage, "bad component value: " + c);
                }
            }
            if (parsed_components.empty()) return fail(kExitUsage, "size report needs --component");
            const auto report = make_size_report(
                parsed_components,
                published_total >= 0 ? std::optional<std::int64_t>(published_total) : std::nullopt);
            if (!emit_report(config, "size_report.json", report.to_json() + "\n", error))
                return fail(kExitData, error);
            return kExitOk;
        }
        if (report_kind == "languages") {
            LanguageDistribution dist;
            if (!counts_file.empty()) {
                std::ifstream in(counts_file);
                if (!in) return fail(kExitData, "cannot open " + counts_file);
                std::vector<std::pair<std::string, std::int64_t>> counts;
                std::string line;
                while (std::getline(in, line)) {
                    const std::string t = trim_copy(line);
                    if (t.empty()) continue;
                    const auto comma = t.find(',');
                    if (comma == std::string::npos) continue;
                    const std::string label = trim_copy(t.substr(0, comma));
                    const std::string value = trim_copy(t.substr(comma + 1));
                    try {
                        counts.emplace_back(label, std::stoll(value));
                    } catch (const std::exception&) {
                        continue;  // header or junk row
                    }
                }
                dist = language_distribution_from_counts(counts);
            } else {
                std::shared_ptr<CorpusStore> store;
                if (int rc = open_store(store); rc != kExitOk) return rc;
                QueryEngine engine(*store, weights, *noise);
                std::pair<int, int> span = default_year_span(*store);
                if (!years_spec.empty()) {
                    auto parsed_span = parse_span(years_spec);
                    if (!parsed_span.ok()) return fail(kExitUsage, parsed_span.error().message);
                    span = parsed_span.value();
                }
                dist = language_distribution(engine, span);
            }
            if (!emit_report(config, "language_distribution.csv", dist.to_csv(), error))
                return fail(kExitData, error);
            return kExitOk;
        }
        if (report_kind == "types") {
            std::shared_ptr<CorpusStore> store;
            if (int rc = open_store(store); rc != kExitOk) return rc;
            std::vector<DocumentRecord> sample;
            store->for_each([&](const DocumentRecord& r) {
                if (r.kind == RecordKind::full) sample.push_back(r);
            });
            const auto table = doc_type_distribution(sample);
            std::ostringstream out;
            out << "doc_type,documents\n";
            for (const auto& [type, count] : table) {
                out << to_string(type) << ',' << count << '\n';
            }
            if (!emit_report(config, "doc_type_distribution.csv", out.str(), error))
                return fail(kExitData, error);
            return kExitOk;
        }
        if (report_kind == "speed") {
            Result<IndexSpeedRow> row = Error{"usage", ""};
            if (online_age >= 0 && days_since_index >= 0) {
                row = indexing_speed_from_ages(online_age, days_since_index);
            } else if (!online_date_str.empty() && !indexed_date_str.empty()) {
                auto online = Date::from_iso(online_date_str);
                auto indexed = Date::from_iso(indexed_date_str);
                if (!online || !indexed) return fail(kExitUsage, "bad date (YYYY-MM-DD)");
                auto days = indexing_speed(*online, *indexed);
                if (days.ok()) {
                    IndexSpeedRow r;
                    r.days = days.value();
                    row = r;
                } else {
                    row = days.error();
                }
            } else {
                return fail(kExitUsage,
                            "speed needs --online-age/--days-since-index or --online/--indexed");
            }
            if (!row.ok()) {
                return fail(error_exit_code(row.error()),
                            row.error().code + ": " + row.error().message);
            }
            ordered_json j;
            j["days"] = row.value().days;
            if (!row.value().margin_note.empty()) j["margin"] = row.value().margin_note;
            if (!emit_report(config, "indexing_speed.json", j.dump() + "\n", error))
                return fail(kExitData, error);
            return kExitOk;
        }
        return fail(kExitUsage, "unknown report kind: " + report_kind);
    }

    // ---- export ---------------------------------------------------------------------
    if (cmd_export->parsed()) {
        std::shared_ptr<CorpusStore> store;
        if (int rc = open_store(store); rc != kExitOk) return rc;
        auto format = export_format_from_string(export_format);
        if (!format) return fail(kExitUsage, "unknown format: " + export_format);
        std::vector<RecordId> ids;
        std::istringstream items(export_ids);
        std::string item;
        while (std::getline(items, item, ',')) {
            const std::string id = trim_copy(item);
            if (!id.empty()) ids.push_back(id);
        }
        auto bytes = export_records(ids, *format, *store);
        if (!bytes.ok()) return fail(kExitData, bytes.error().code + ": " + bytes.error().message);
        std::cout << bytes.value();
        return kExitOk;
    }

    return fail(kExitUsage, "no subcommand");
}
