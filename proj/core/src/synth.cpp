#include "scholarlite/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace scholarlite {

using ordered_json = nlohmann::ordered_json;

namespace {

// Deterministic across runs of the same binary; all draws go through these
// helpers so no implementation-defined distribution is involved.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9E3779B97F4A7C15ULL) {}

    std::uint64_t next() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
    std::int64_t between(std::int64_t lo, std::int64_t hi) {  // inclusive
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
    double real() {  // [0, 1)
        return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0);
    }

private:
    std::uint64_t state_;
};

const std::vector<std::string>& word_list(int which) {
    static const std::vector<std::string> adjectives = {
        "adaptive",  "bounded",   "coherent",  "diffuse",   "elastic",  "fractal",
        "granular",  "harmonic",  "iterative", "layered",   "modular",  "nonlinear",
        "orthogonal", "periodic", "quantized", "recursive", "sparse",   "temporal",
        "uniform",   "variational", "weighted", "anisotropic", "bistable", "convex"};
    static const std::vector<std::string> nouns = {
        "lattices",  "manifolds", "networks",  "operators", "polymers",  "reactors",
        "sediments", "tensors",   "vortices",  "waveguides", "membranes", "catalysts",
        "glaciers",  "isotopes",  "neurons",   "plasmas",   "proteins",  "quasars",
        "rotors",    "spectra",   "turbines",  "wetlands",  "archives",  "ballads"};
    static const std::vector<std::string> topics = {
        "annealing",   "bifurcation", "convection",  "diffraction", "entanglement",
        "fermentation", "germination", "hybridization", "ionization", "jurisprudence",
        "kinematics",  "localization", "morphogenesis", "nucleation", "oxidation",
        "percolation", "quadrature",  "resonance",   "scattering",  "tessellation",
        "urbanization", "vitrification", "weathering", "xenografting"};
    static const std::vector<std::string> suffix_a = {
        "amaranth", "basilisk", "cardamom", "dulcimer", "eglantine", "foxglove",
        "gossamer", "heliotrope", "ironwood", "juniper", "kestrel",  "lodestone",
        "marigold", "nightjar", "obsidian", "periwinkle", "quillwort", "rosemary",
        "saffron",  "tamarind", "umber",    "verbena",  "wisteria", "yarrow"};
    static const std::vector<std::string> suffix_b = {
        "anvil",   "bellows", "chisel",  "dynamo",  "easel",   "flywheel",
        "gimbal",  "hoist",   "ingot",   "jigsaw",  "kiln",    "lathe",
        "mallet",  "nozzle",  "oarlock", "pulley",  "quern",   "ratchet",
        "sprocket", "trowel", "upright", "vise",    "winch",   "yoke"};
    static const std::vector<std::string> suffix_c = {
        "aurora",  "breeze",  "cascade", "drizzle", "ember",   "frost",
        "gale",    "haze",    "icicle",  "jetstream", "karst",  "lagoon",
        "mistral", "nimbus",  "outcrop", "plateau", "quagmire", "riptide",
        "slough",  "thermal", "updraft", "veldt",   "whirlpool", "zephyr"};
    switch (which) {
        case 0: return adjectives;
        case 1: return nouns;
        case 2: return topics;
        case 3: return suffix_a;
        case 4: return suffix_b;
        default: return suffix_c;
    }
}

const std::vector<std::string>& surname_stems() {
    static const std::vector<std::string> stems = {
        "Ashford", "Beltran", "Carmody", "Delacroix", "Eastwood", "Farrow",
        "Goswami", "Halvorsen", "Ibarra", "Jellicoe", "Kowalczyk", "Lindqvist",
        "Moravec", "Nakashima", "Okonkwo", "Pemberton", "Quintana", "Rasmussen",
        "Sorokin", "Takahara", "Underhill", "Vasquez", "Winterbourne", "Yamazaki"};
    return stems;
}

const std::vector<std::string>& journal_pool() {
    static const std::vector<std::string> pool = {
        "Journal of Synthetic Studies",   "Annals of Combinatorial Science",
        "Quarterly Review of Dynamics",   "Transactions on Applied Methods",
        "Archive for Field Observations", "Bulletin of Measured Phenomena",
        "Letters in Structural Analysis", "Review of Comparative Records",
        "Proceedings of Formal Inquiry",  "Studies in Quantitative Method",
        "Zeitschrift fur Modellbildung",  "Revista de Metodos Numericos"};
    return pool;
}

struct DomainSpec {
    const char* domain;
    SourceType type;
    bool whitelisted;
    double weight;
};

const std::vector<DomainSpec>& domain_pool() {
    static const std::vector<DomainSpec> pool = {
        {"journals.alphapress.com", SourceType::publisher, false, 0.26},
        {"press.betanova.com", SourceType::publisher, false, 0.14},
        {"repo.gammatech.edu", SourceType::repository, true, 0.14},
        {"eprints.deltauni.edu", SourceType::repository, true, 0.10},
        {"archive.epsilonvault.org", SourceType::database, true, 0.12},
        {"papers.zetalab.cn", SourceType::university, false, 0.10},
        {"hub.etasocial.net", SourceType::social, false, 0.06},
        {"texts.thetainst.de", SourceType::university, false, 0.08},
    };
    return pool;
}

std::string encode_words(std::int64_t index, int base_list, int words) {
    std::string out;
    std::int64_t v = index;
    for (int w = 0; w < words; ++w) {
        const auto& list = word_list(base_list + (w % 3));
        if (w) out += ' ';
        out += list[static_cast<std::size_t>(v % 24)];
        v /= 24;
    }
    return out;
}

template <typename K>
K pick_share(const std::map<K, double>& shares, double u) {
    double acc = 0.0;
    K last{};
    for (const auto& [key, frac] : shares) {
        last = key;
        acc += frac;
        if (u < acc) return key;
    }
    return last;
}

std::string title_case(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

std::string trim_copy(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

CorpusConfig CorpusConfig::defaults() {
    CorpusConfig c;
    // Shares modeled on the observed language and typology distributions.
    c.language_shares = {
        {Language::english, 0.50},   {Language::simplified_chinese, 0.22},
        {Language::traditional_chinese, 0.04}, {Language::japanese, 0.04},
        {Language::german, 0.04},    {Language::spanish, 0.04},
        {Language::french, 0.03},    {Language::portuguese, 0.02},
        {Language::korean, 0.02},    {Language::italian, 0.01},
        {Language::polish, 0.01},    {Language::dutch, 0.01},
        {Language::turkish, 0.01},   {Language::unknown, 0.01},
    };
    c.type_shares = {
        {DocType::unknown, 0.30}, {DocType::article, 0.40},
        {DocType::book_chapter, 0.14}, {DocType::thesis, 0.06},
        {DocType::conference, 0.05},   {DocType::report, 0.02},
        {DocType::other, 0.02},        {DocType::patent, 0.01},
    };
    return c;
}

Result<void> CorpusConfig::validate() const {
    if (n_documents < 0) return Error{"bad-config", "n_documents must be >= 0"};
    // Above 24^3 docs the generated titles can no longer guarantee pairwise
    // dissimilarity under the 0.90 matching threshold.
    if (n_documents > 13824) {
        return Error{"bad-config", "n_documents beyond the title namespace (24^3)"};
    }
    if (year_range.first > year_range.second) {
        return Error{"bad-config", "year_range lo > hi"};
    }
    for (double f : {duplicate_rate, stub_reference_rate, churn_rate}) {
        if (f < 0.0 || f > 1.0) return Error{"bad-config", "rates must be in [0,1]"};
    }
    if (citation_exponent <= 1.0) {
        return Error{"bad-config", "citation_exponent must be > 1"};
    }
    auto check_shares = [](const auto& shares, const char* what) -> Result<void> {
        if (shares.empty()) return Error{"bad-config", std::string(what) + " missing"};
        double sum = 0.0;
        for (const auto& [key, frac] : shares) {
            (void)key;
            if (frac < 0.0 || frac > 1.0) {
                return Error{"bad-config", std::string(what) + " fraction outside [0,1]"};
            }
            sum += frac;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            return Error{"infeasible-shares", std::string(what) + " must sum to 1"};
        }
        return {};
    };
    if (auto r = check_shares(language_shares, "language_shares"); !r.ok()) return r;
    if (auto r = check_shares(type_shares, "type_shares"); !r.ok()) return r;
    return {};
}

Result<CorpusConfig> CorpusConfig::parse_text(const std::string& text) {
    CorpusConfig config = CorpusConfig::defaults();
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim_copy(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            return Error{"bad-config", "line " + std::to_string(lineno) + ": expected key=value"};
        }
        const std::string key = trim_copy(t.substr(0, eq));
        const std::string value = trim_copy(t.substr(eq + 1));
        try {
            if (key == "seed") {
                config.seed = std::stoull(value);
            } else if (key == "n_documents") {
                config.n_documents = std::stoll(value);
            } else if (key == "year_range") {
                const auto dots = value.find("..");
                if (dots == std::string::npos) throw std::invalid_argument("year_range");
                config.year_range = {std::stoi(value.substr(0, dots)),
                                     std::stoi(value.substr(dots + 2))};
            } else if (key == "duplicate_rate") {
                config.duplicate_rate = std::stod(value);
            } else if (key == "stub_reference_rate") {
                config.stub_reference_rate = std::stod(value);
            } else if (key == "citation_exponent") {
                config.citation_exponent = std::stod(value);
            } else if (key == "churn_rate") {
                config.churn_rate = std::stod(value);
            } else if (key == "language_shares" || key == "type_shares") {
                std::map<std::string, double> raw;
                std::istringstream items(value);
                std::string item;
                while (std::getline(items, item, ',')) {
                    const auto colon = item.find(':');
                    if (colon == std::string::npos) throw std::invalid_argument("share");
                    raw[trim_copy(item.substr(0, colon))] = std::stod(trim_copy(item.substr(colon + 1)));
                }
                if (key == "language_shares") {
                    config.language_shares.clear();
                    for (const auto& [name, frac] : raw) {
                        auto lang = language_from_string(name);
                        if (!lang) {
                            return Error{"bad-config", "unknown language: " + name};
                        }
                        config.language_shares[*lang] = frac;
                    }
                } else {
                    config.type_shares.clear();
                    for (const auto& [name, frac] : raw) {
                        auto type = doc_type_from_string(name);
                        if (!type) return Error{"bad-config", "unknown doc_type: " + name};
                        config.type_shares[*type] = frac;
                    }
                }
            } else {
                return Error{"bad-config", "unknown key: " + key};
            }
        } catch (const std::exception&) {
            return Error{"bad-config", "line " + std::to_string(lineno) + ": bad value for " + key};
        }
    }
    if (auto check = config.validate(); !check.ok()) return check.error();
    return config;
}

Result<CorpusConfig> CorpusConfig::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return Error{"io-error", "cannot open config: " + path};
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_text(buffer.str());
}

namespace {

struct DocPlan {
    std::int64_t index = 0;
    std::string title;
    std::string slug;
    std::vector<std::pair<std::string, std::string>> authors;  // (surname, initials)
    int year = 0;
    int month = 1;
    int day = 1;
    Language language = Language::unknown;
    DocType doc_type = DocType::unknown;
    std::string source_name;
    std::size_t home_domain = 0;
    std::vector<std::size_t> copy_domains;  // includes home
    bool churned = false;
    std::vector<std::string> references;  // canonical strings, corpus + phantom
};

std::string canonical_reference(const std::string& surname, const std::string& initials, int year,
                                const std::string& title, const std::string& source) {
    std::string out = surname + ", " + initials + " (" + std::to_string(year) + "). " + title + ".";
    if (!source.empty()) out += " " + source + ".";
    return out;
}

std::string author_surname(std::int64_t author_index) {
    const auto& stems = surname_stems();
    const auto a = static_cast<std::size_t>(author_index % 24);
    const auto b = static_cast<std::size_t>((author_index / 24) % 24);
    if (author_index < 24) return stems[a];
    return stems[a] + "-" + word_list(3)[b];
}

std::string author_initials(std::int64_t author_index) {
    static const char* initials[] = {"A.", "B.", "C.", "D.", "E.", "F.", "G.", "H.",
                                     "J.", "K.", "L.", "M.", "N.", "P.", "R.", "S.",
                                     "T.", "V.", "W.", "Y.", "J.L.", "M.C.", "A.R.", "E.O."};
    return initials[static_cast<std::size_t>((author_index / 576) % 24)];
}

std::string phantom_title(std::int64_t k) {
    return "Unrecorded " + encode_words(k, 3, 3) + " compendium";
}

std::string phantom_surname(std::int64_t k) {
    return "Voidling-" + title_case(word_list(4)[static_cast<std::size_t>(k % 24)]);
}

Language meta_language(const DocPlan& plan) { return plan.language; }

std::vector<MetaTag> build_meta_tags(const DocPlan& plan, bool use_eprints) {
    std::vector<MetaTag> tags;
    auto add = [&](MetaScheme scheme, const char* key, const std::string& value) {
        tags.push_back({scheme, key, value});
    };
    char date[16];
    std::snprintf(date, sizeof(date), "%04d-%02d-%02d", plan.year, plan.month, plan.day);

    const bool has_language = meta_language(plan) != Language::unknown;
    if (use_eprints) {
        add(MetaScheme::eprints, "eprints.title", plan.title);
        for (const auto& [surname, initials] : plan.authors) {
            add(MetaScheme::eprints, "eprints.creators_name", surname + ", " + initials);
        }
        add(MetaScheme::eprints, "eprints.date", date);
        if (has_language) add(MetaScheme::eprints, "eprints.language", to_string(plan.language));
        if (plan.doc_type != DocType::unknown) {
            add(MetaScheme::eprints, "eprints.type", to_string(plan.doc_type));
        }
        if (!plan.source_name.empty()) {
            add(MetaScheme::eprints, "eprints.publication", plan.source_name);
        }
        return tags;
    }

    add(MetaScheme::highwire, "citation_title", plan.title);
    for (const auto& [surname, initials] : plan.authors) {
        add(MetaScheme::highwire, "citation_author", surname + ", " + initials);
    }
    add(MetaScheme::highwire, "citation_publication_date", date);
    add(MetaScheme::highwire, "citation_online_date", date);
    if (has_language) add(MetaScheme::highwire, "citation_language", to_string(plan.language));
    switch (plan.doc_type) {
        case DocType::article:
            add(MetaScheme::highwire, "citation_journal_title", plan.source_name);
            break;
        case DocType::book_chapter:
            add(MetaScheme::highwire, "citation_inbook_title", plan.source_name);
            break;
        case DocType::thesis:
            add(MetaScheme::highwire, "citation_dissertation_institution", plan.source_name);
            break;
        case DocType::conference:
            add(MetaScheme::highwire, "citation_conference_title", plan.source_name);
            break;
        case DocType::report:
            add(MetaScheme::highwire, "citation_technical_report_institution", plan.source_name);
            break;
        case DocType::patent:
            add(MetaScheme::highwire, "citation_patent_number", "SYN-" + std::to_string(plan.index));
            break;
        case DocType::other:
        case DocType::unknown:
            break;  // no type-bearing tag
    }
    return tags;
}

StructuredText build_body(const DocPlan& plan) {
    StructuredText body;
    body.searchable = true;
    std::string author_line;
    for (std::size_t i = 0; i < plan.authors.size(); ++i) {
        if (i) author_line += " and ";
        author_line += plan.authors[i].second + " " + plan.authors[i].first;
    }
    body.blocks.push_back({plan.title, 20.0, 1});
    body.blocks.push_back({author_line, 14.0, 1});
    body.blocks.push_back({"We examine " + plan.slug + " effects and report measured outcomes.",
                           10.0, 1});
    body.blocks.push_back({"Methods and materials follow the usual protocol.", 10.0, 1});
    body.blocks.push_back({"Discussion of the findings.", 10.0, 2});
    if (!plan.references.empty()) {
        body.blocks.push_back({"References", 12.0, 3});
        for (std::size_t i = 0; i < plan.references.size(); ++i) {
            body.blocks.push_back({"[" + std::to_string(i + 1) + "] " + plan.references[i], 10.0, 3});
        }
    }
    return body;
}

}  // namespace

Result<GeneratedCorpus> generate_corpus(const CorpusConfig& config) {
    if (auto check = config.validate(); !check.ok()) return check.error();
    Rng rng(config.seed);
    const auto n = config.n_documents;
    const auto& domains = domain_pool();

    // --- plan documents ----------------------------------------------------
    std::vector<DocPlan> docs(static_cast<std::size_t>(n));
    const std::int64_t author_pool = std::max<std::int64_t>(8, n / 8);
    for (std::int64_t i = 0; i < n; ++i) {
        DocPlan& d = docs[static_cast<std::size_t>(i)];
        d.index = i;
        const std::int64_t mixed = (i * 7919) % 331776;
        d.slug = encode_words(mixed, 3, 4);
        d.title = title_case(encode_words(i, 0, 3) + " of " + d.slug);
        {
            std::string slug_dashes = d.slug;
            std::replace(slug_dashes.begin(), slug_dashes.end(), ' ', '-');
            d.slug = slug_dashes;
        }

        const std::int64_t first_author = rng.between(0, author_pool - 1);
        const auto n_authors = static_cast<std::size_t>(rng.between(1, 4));
        std::set<std::int64_t> chosen{first_author};
        d.authors.emplace_back(author_surname(first_author), author_initials(first_author));
        while (d.authors.size() < n_authors) {
            const std::int64_t a = rng.between(0, author_pool - 1);
            if (!chosen.insert(a).second) continue;
            d.authors.emplace_back(author_surname(a), author_initials(a));
        }

        d.year = static_cast<int>(rng.between(config.year_range.first, config.year_range.second));
        d.month = static_cast<int>(rng.between(1, 12));
        d.day = static_cast<int>(rng.between(1, 28));
        d.language = pick_share(config.language_shares, rng.real());
        d.doc_type = pick_share(config.type_shares, rng.real());
        switch (d.doc_type) {
            case DocType::article:
                d.source_name = journal_pool()[static_cast<std::size_t>(
                    rng.between(0, static_cast<std::int64_t>(journal_pool().size()) - 1))];
                break;
            case DocType::book_chapter:
                d.source_name = "Handbook of " + title_case(word_list(2)[static_cast<std::size_t>(
                                                     rng.between(0, 23))]);
                break;
            case DocType::thesis:
                d.source_name = "Deltauni Graduate School";
                break;
            case DocType::conference:
                d.source_name = "Symposium on " + title_case(word_list(2)[static_cast<std::size_t>(
                                                      rng.between(0, 23))]);
                break;
            case DocType::report:
                d.source_name = "Thetainst Technical Reports";
                break;
            default:
                break;  // no source
        }

        double u = rng.real();
        double acc = 0.0;
        d.home_domain = domains.size() - 1;
        for (std::size_t k = 0; k < domains.size(); ++k) {
            acc += domains[k].weight;
            if (u < acc) {
                d.home_domain = k;
                break;
            }
        }
        d.copy_domains = {d.home_domain};
    }

    // --- duplicates: extra copies on other domains --------------------------
    const auto n_dups = static_cast<std::int64_t>(std::llround(
        static_cast<double>(n) * config.duplicate_rate));
    {
        std::set<std::int64_t> dup_docs;
        while (static_cast<std::int64_t>(dup_docs.size()) < std::min(n_dups, n)) {
            dup_docs.insert(rng.between(0, n - 1));
        }
        for (std::int64_t idx : dup_docs) {
            DocPlan& d = docs[static_cast<std::size_t>(idx)];
            const auto extra = static_cast<std::size_t>(rng.between(1, 2));
            while (d.copy_domains.size() < 1 + extra) {
                const auto k = static_cast<std::size_t>(
                    rng.between(0, static_cast<std::int64_t>(domains.size()) - 1));
                if (std::find(d.copy_domains.begin(), d.copy_domains.end(), k) ==
                    d.copy_domains.end()) {
                    d.copy_domains.push_back(k);
                }
            }
        }
    }

    // --- churn -------------------------------------------------------------
    const auto n_churn = static_cast<std::int64_t>(std::llround(
        static_cast<double>(n) * config.churn_rate));
    {
        std::set<std::int64_t> churned;
        while (static_cast<std::int64_t>(churned.size()) < std::min(n_churn, n)) {
            churned.insert(rng.between(0, n - 1));
        }
        for (std::int64_t idx : churned) docs[static_cast<std::size_t>(idx)].churned = true;
    }

    // --- citation graph ------------------------------------------------------
    // Target inbound counts follow a discrete power law; citing documents are
    // drawn from the same or later publication years.
    std::vector<std::vector<std::int64_t>> by_year_cumulative;  // candidates with year >= y
    std::map<std::int64_t, std::set<std::int64_t>> graph;       // cited -> citers
    {
        std::vector<std::vector<std::int64_t>> per_year(
            static_cast<std::size_t>(config.year_range.second - config.year_range.first + 1));
        for (const auto& d : docs) {
            per_year[static_cast<std::size_t>(d.year - config.year_range.first)].push_back(d.index);
        }
        // suffix concatenation: candidates[y] = docs with year >= y
        by_year_cumulative.assign(per_year.size(), {});
        for (std::size_t y = per_year.size(); y-- > 0;) {
            auto& bucket = by_year_cumulative[y];
            bucket = per_year[y];
            if (y + 1 < per_year.size()) {
                bucket.insert(bucket.end(), by_year_cumulative[y + 1].begin(),
                              by_year_cumulative[y + 1].end());
            }
        }

        const double tail = config.citation_exponent - 1.0;
        for (const auto& d : docs) {
            const double u = std::max(rng.real(), 1e-12);
            auto target = static_cast<std::int64_t>(std::floor(std::pow(u, -1.0 / tail))) - 1;
            target = std::min<std::int64_t>(target, 200);
            if (target <= 0) continue;
            const auto& pool =
                by_year_cumulative[static_cast<std::size_t>(d.year - config.year_range.first)];
            if (pool.size() < 2) continue;
            std::set<std::int64_t> citers;
            const auto want = std::min<std::int64_t>(
                target, static_cast<std::int64_t>(pool.size()) - 1);
            std::int64_t attempts = 0;
            while (static_cast<std::int64_t>(citers.size()) < want && attempts < want * 20 + 64) {
                ++attempts;
                const auto pick = pool[static_cast<std::size_t>(
                    rng.below(static_cast<std::uint64_t>(pool.size())))];
                if (pick == d.index) continue;
                citers.insert(pick);
            }
            if (!citers.empty()) graph[d.index] = std::move(citers);
        }
    }

    // References: each citer lists a canonical string per cited doc.
    for (const auto& [cited, citers] : graph) {
        const DocPlan& target = docs[static_cast<std::size_t>(cited)];
        const std::string ref =
            canonical_reference(target.authors.front().first, target.authors.front().second,
                                target.year, target.title, target.source_name);
        for (std::int64_t citer : citers) {
            docs[static_cast<std::size_t>(citer)].references.push_back(ref);
        }
    }

    // Phantom references (stub fodder): a share of all references points at
    // documents that exist nowhere in the corpus. Half as many targets as
    // references, so some stubs accrue more than one citation.
    {
        std::int64_t corpus_refs = 0;
        for (const auto& d : docs) corpus_refs += static_cast<std::int64_t>(d.references.size());
        const double rate = config.stub_reference_rate;
        const auto phantom_refs = static_cast<std::int64_t>(
            rate >= 1.0 ? corpus_refs : std::llround(static_cast<double>(corpus_refs) * rate /
                                                     (1.0 - rate)));
        const std::int64_t target_space =
            std::max<std::int64_t>(phantom_refs > 0 ? 1 : 0, phantom_refs / 2);
        for (std::int64_t k = 0; k < phantom_refs && n > 0; ++k) {
            const std::int64_t target = rng.between(0, std::max<std::int64_t>(target_space - 1, 0));
            const std::int64_t citer = rng.between(0, n - 1);
            // One canonical string per phantom target: year derived from the
            // target so repeated references stay identical.
            const int stable_year = config.year_range.first +
                                    static_cast<int>(target % (config.year_range.second -
                                                               config.year_range.first + 1));
            docs[static_cast<std::size_t>(citer)].references.push_back(canonical_reference(
                phantom_surname(target), "X.", stable_year, phantom_title(target), ""));
        }
    }

    // --- snapshots -----------------------------------------------------------
    GeneratedCorpus out;
    const Date gen0{2017, 3, 1};
    const Date gen1{2017, 3, 31};
    const bool churning = n_churn > 0;

    for (std::size_t k = 0; k < domains.size(); ++k) {
        SourceSnapshot snap;
        snap.domain = domains[k].domain;
        snap.tld = tld_of(snap.domain);
        snap.location_whitelisted = domains[k].whitelisted;
        snap.source_type = domains[k].type;
        snap.snapshot_date = gen0;
        for (const auto& d : docs) {
            if (std::find(d.copy_domains.begin(), d.copy_domains.end(), k) == d.copy_domains.end())
                continue;
            RawDocument raw;
            const bool pdf = (d.index % 5) == 1;
            raw.url = std::string("https://") + snap.domain + "/pub/" + d.slug +
                      (pdf ? ".pdf" : ".html");
            // Highwire has no tag for the "other" typology; those documents
            // always carry eprints tags.
            raw.meta_tags =
                build_meta_tags(d, (d.index % 3) == 2 || d.doc_type == DocType::other);
            raw.body = build_body(d);
            raw.byte_size = 40000 + (d.index * 937) % 2000000;
            raw.file_kind = pdf ? FileKind::pdf : FileKind::html;
            raw.abstract_visible = true;
            snap.documents.push_back(std::move(raw));
        }
        out.snapshots.push_back(std::move(snap));
    }
    if (churning) {
        // Second generation: identical except churned documents vanish from
        // every domain that hosted them.
        for (std::size_t k = 0; k < domains.size(); ++k) {
            SourceSnapshot snap;
            snap.domain = out.snapshots[k].domain;
            snap.tld = out.snapshots[k].tld;
            snap.location_whitelisted = out.snapshots[k].location_whitelisted;
            snap.source_type = out.snapshots[k].source_type;
            snap.snapshot_date = gen1;
            std::size_t di = 0;
            for (const auto& d : docs) {
                if (std::find(d.copy_domains.begin(), d.copy_domains.end(), k) ==
                    d.copy_domains.end())
                    continue;
                if (!d.churned) snap.documents.push_back(out.snapshots[k].documents[di]);
                ++di;
            }
            out.snapshots.push_back(std::move(snap));
        }
    }
    std::stable_sort(out.snapshots.begin(), out.snapshots.end(),
                     [](const SourceSnapshot& a, const SourceSnapshot& b) {
                         if (a.snapshot_date != b.snapshot_date)
                             return a.snapshot_date < b.snapshot_date;
                         return a.domain < b.domain;
                     });

    // --- ground truth ---------------------------------------------------------
    GroundTruth& truth = out.truth;
    for (const auto& d : docs) {
        TruthDocument td;
        td.index = d.index;
        td.title = d.title;
        td.first_author_surname = d.authors.front().first;
        td.first_author_initials = d.authors.front().second;
        td.year = d.year;
        td.language = d.language;
        td.doc_type = d.doc_type;
        td.source_name = d.source_name;
        td.home_domain = domains[d.home_domain].domain;
        for (std::size_t k : d.copy_domains) td.copy_domains.push_back(domains[k].domain);
        td.churned = d.churned;
        truth.documents.push_back(std::move(td));

        if (d.churned) continue;
        ++truth.true_size;
        ++truth.per_year[d.year];
        ++truth.per_language[d.language];
        ++truth.per_type[d.doc_type];
        if (d.copy_domains.size() >= 2) {
            TruthVersionGroup group;
            group.doc_index = d.index;
            group.title = d.title;
            for (std::size_t k : d.copy_domains) group.domains.push_back(domains[k].domain);
            truth.version_groups.push_back(std::move(group));
        }
    }
    for (const auto& [cited, citers] : graph) {
        if (docs[static_cast<std::size_t>(cited)].churned) continue;
        std::set<std::int64_t> survivors;
        for (std::int64_t citer : citers) {
            if (!docs[static_cast<std::size_t>(citer)].churned) survivors.insert(citer);
        }
        if (!survivors.empty()) truth.true_citation_graph[cited] = std::move(survivors);
    }
    // Stubs: every phantom target cited by a survivor, plus churned documents
    // still referenced by surviving reference lists.
    {
        std::set<std::string> stub_titles;
        for (const auto& d : docs) {
            if (d.churned) continue;
            for (const auto& ref : d.references) {
                if (ref.rfind("Voidling-", 0) == 0) stub_titles.insert(ref);
            }
        }
        // Distinct phantom strings == distinct targets (canonical strings).
        truth.expected_stubs = static_cast<std::int64_t>(stub_titles.size());
        for (const auto& [cited, citers] : graph) {
            if (!docs[static_cast<std::size_t>(cited)].churned) continue;
            for (std::int64_t citer : citers) {
                if (!docs[static_cast<std::size_t>(citer)].churned) {
                    ++truth.expected_stubs;
                    break;
                }
            }
        }
    }
    {
        std::set<std::string> tlds;
        for (const auto& spec : domains) tlds.insert(tld_of(spec.domain));
        truth.tlds.assign(tlds.begin(), tlds.end());
    }
    return out;
}

std::string GroundTruth::to_json() const {
    ordered_json j;
    j["true_size"] = true_size;
    ordered_json per_year_json = ordered_json::object();
    for (const auto& [year, count] : per_year) per_year_json[std::to_string(year)] = count;
    j["per_year"] = per_year_json;
    ordered_json per_language_json = ordered_json::object();
    for (const auto& [lang, count] : per_language) per_language_json[to_string(lang)] = count;
    j["per_language"] = per_language_json;
    ordered_json per_type_json = ordered_json::object();
    for (const auto& [type, count] : per_type) per_type_json[to_string(type)] = count;
    j["per_type"] = per_type_json;
    ordered_json graph = ordered_json::object();
    for (const auto& [cited, citers] : true_citation_graph) {
        graph[std::to_string(cited)] = std::vector<std::int64_t>(citers.begin(), citers.end());
    }
    j["true_citation_graph"] = graph;
    ordered_json groups = ordered_json::array();
    for (const auto& g : version_groups) {
        ordered_json jg;
        jg["doc_index"] = g.doc_index;
        jg["title"] = g.title;
        jg["domains"] = g.domains;
        groups.push_back(jg);
    }
    j["version_groups"] = groups;
    j["expected_stubs"] = expected_stubs;
    j["tlds"] = tlds;
    ordered_json docs_json = ordered_json::array();
    for (const auto& d : documents) {
        ordered_json jd;
        jd["index"] = d.index;
        jd["title"] = d.title;
        jd["first_author_surname"] = d.first_author_surname;
        jd["first_author_initials"] = d.first_author_initials;
        jd["year"] = d.year;
        jd["language"] = to_string(d.language);
        jd["doc_type"] = to_string(d.doc_type);
        jd["source_name"] = d.source_name;
        jd["home_domain"] = d.home_domain;
        jd["copy_domains"] = d.copy_domains;
        jd["churned"] = d.churned;
        docs_json.push_back(jd);
    }
    j["documents"] = docs_json;
    return j.dump(2);
}

Result<ReferenceDb> generate_reference_db(const CorpusStore& store,
                                          const ReferenceDbSelectivity& selectivity,
                                          std::uint64_t seed) {
    for (double f : {selectivity.english_bias, selectivity.coverage}) {
        if (f < 0.0 || f > 1.0) return Error{"bad-config", "fractions must be in [0,1]"};
    }
    Rng rng(seed);
    ReferenceDb db;
    // Iterate in id order so selection is reproducible.
    for (const auto& record : store.all_records()) {
        if (record.kind != RecordKind::full) continue;
        if (selectivity.journal_only && record.doc_type != DocType::article) continue;
        double keep = selectivity.coverage;
        if (record.language == Language::english) {
            keep += selectivity.english_bias * (1.0 - selectivity.coverage);
        }
        if (rng.real() < keep) db.selected.insert(record.record_id);
    }
    for (const RecordId& id : db.selected) {
        const auto record = store.get_record(id);
        std::int64_t restricted = 0;
        for (const RecordId& citer : record->cited_by) {
            if (db.selected.count(citer) > 0) ++restricted;
        }
        db.citation_counts[id] = restricted;
        ComparisonRow row;
        row.record_id = id;
        row.citations_a = static_cast<std::int64_t>(record->cited_by.size());
        row.citations_b = restricted;
        db.rows.push_back(std::move(row));
    }
    return db;
}

std::string ReferenceDb::to_csv() const {
    std::ostringstream out;
    out << "record_id,citations_corpus,citations_reference\n";
    for (const auto& row : rows) {
        out << row.record_id << ',' << row.citations_a << ',' << row.citations_b << '\n';
    }
    return out.str();
}

GroundTruthReport ground_truth_report(const GroundTruth& truth) {
    GroundTruthReport report;
    {
        std::ostringstream out;
        out << "metric,value\n";
        out << "true_size," << truth.true_size << '\n';
        out << "version_groups," << truth.version_groups.size() << '\n';
        out << "expected_stubs," << truth.expected_stubs << '\n';
        report.summary_csv = out.str();
    }
    {
        std::ostringstream out;
        out << "year,documents\n";
        for (const auto& [year, count] : truth.per_year) out << year << ',' << count << '\n';
        report.per_year_csv = out.str();
    }
    {
        std::ostringstream out;
        out << "language,documents\n";
        for (const auto& [lang, count] : truth.per_language) {
            out << to_string(lang) << ',' << count << '\n';
        }
        report.per_language_csv = out.str();
    }
    {
        std::ostringstream out;
        out << "doc_type,documents\n";
        for (const auto& [type, count] : truth.per_type) {
            out << to_string(type) << ',' << count << '\n';
        }
        report.per_type_csv = out.str();
    }
    return report;
}

}  // namespace scholarlite
