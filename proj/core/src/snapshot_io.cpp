#include "scholarlite/snapshot_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace scholarlite {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string format_blocks(const StructuredText& text) {
    std::ostringstream out;
    for (const auto& b : text.blocks) {
        std::string line = b.text;
        std::replace(line.begin(), line.end(), '\t', ' ');
        std::replace(line.begin(), line.end(), '\n', ' ');
        char font[32];
        std::snprintf(font, sizeof(font), "%g", b.font_size);
        out << b.page << '\t' << font << '\t' << line << '\n';
    }
    return out.str();
}

Result<StructuredText> parse_blocks_file(const std::string& path, bool searchable) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return Error{"io-error", "cannot open " + path};
    StructuredText text;
    text.searchable = searchable;
    std::string line;
    std::size_t lineno = 0;
    int last_page = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) {
            return Error{"bad-block-line", path + ":" + std::to_string(lineno)};
        }
        TextBlock b;
        try {
            b.page = std::stoi(line.substr(0, t1));
            b.font_size = std::stod(line.substr(t1 + 1, t2 - t1 - 1));
        } catch (const std::exception&) {
            return Error{"bad-block-line", path + ":" + std::to_string(lineno)};
        }
        b.text = line.substr(t2 + 1);
        if (b.page <= 0 || b.font_size <= 0) {
            return Error{"bad-block-line", path + ":" + std::to_string(lineno)};
        }
        if (b.page < last_page) {
            return Error{"pages-not-monotone", path + ":" + std::to_string(lineno)};
        }
        last_page = b.page;
        text.blocks.push_back(std::move(b));
    }
    return text;
}

namespace {

std::string doc_file_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "doc%05zu.txt", index);
    return buf;
}

}  // namespace

Result<void> write_snapshot(const SourceSnapshot& snapshot, const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) return Error{"io-error", "cannot create " + dir};

    ordered_json manifest;
    manifest["domain"] = snapshot.domain;
    manifest["tld"] = snapshot.tld;
    manifest["snapshot_date"] = snapshot.snapshot_date.to_iso();
    manifest["location_whitelisted"] = snapshot.location_whitelisted;
    manifest["source_type"] = to_string(snapshot.source_type);
    ordered_json docs = ordered_json::array();
    for (std::size_t i = 0; i < snapshot.documents.size(); ++i) {
        const RawDocument& d = snapshot.documents[i];
        const std::string fname = doc_file_name(i);
        ordered_json jd;
        jd["url"] = d.url;
        jd["text_file"] = fname;
        ordered_json tags = ordered_json::array();
        for (const auto& t : d.meta_tags) {
            tags.push_back({to_string(t.scheme), t.key, t.value});
        }
        jd["meta_tags"] = tags;
        jd["byte_size"] = d.byte_size;
        jd["file_kind"] = to_string(d.file_kind);
        jd["abstract_visible"] = d.abstract_visible;
        jd["searchable"] = d.body.searchable;
        docs.push_back(jd);

        std::ofstream out(fs::path(dir) / fname, std::ios::binary);
        if (!out) return Error{"io-error", "cannot write doc file in " + dir};
        out << format_blocks(d.body);
    }
    manifest["documents"] = docs;

    std::ofstream out(fs::path(dir) / "manifest.json", std::ios::binary);
    if (!out) return Error{"io-error", "cannot write manifest in " + dir};
    out << manifest.dump(2) << '\n';
    return {};
}

Result<SourceSnapshot> read_snapshot(const std::string& dir) {
    std::ifstream in(fs::path(dir) / "manifest.json", std::ios::binary);
    if (!in) return Error{"io-error", "no manifest.json in " + dir};
    ordered_json manifest = ordered_json::parse(in, nullptr, false);
    if (manifest.is_discarded()) return Error{"bad-manifest", dir};
    try {
        SourceSnapshot snap;
        snap.domain = manifest.at("domain").get<std::string>();
        snap.tld = manifest.value("tld", tld_of(snap.domain));
        auto date = Date::from_iso(manifest.at("snapshot_date").get<std::string>());
        if (!date) return Error{"bad-manifest", dir + ": bad snapshot_date"};
        snap.snapshot_date = *date;
        snap.location_whitelisted = manifest.at("location_whitelisted").get<bool>();
        if (manifest.contains("source_type")) {
            auto st = source_type_from_string(manifest.at("source_type").get<std::string>());
            if (!st) return Error{"bad-manifest", dir + ": bad source_type"};
            snap.source_type = *st;
        } else {
            snap.source_type =
                snap.location_whitelisted ? SourceType::repository : SourceType::other;
        }
        if (snap.tld != tld_of(snap.domain)) {
            return Error{"bad-manifest", dir + ": tld is not the terminal label of domain"};
        }
        for (const auto& jd : manifest.at("documents")) {
            RawDocument d;
            d.url = jd.at("url").get<std::string>();
            d.byte_size = jd.at("byte_size").get<std::int64_t>();
            auto fk = file_kind_from_string(jd.at("file_kind").get<std::string>());
            if (!fk) return Error{"bad-manifest", dir + ": bad file_kind"};
            d.file_kind = *fk;
            d.abstract_visible = jd.at("abstract_visible").get<bool>();
            for (const auto& t : jd.at("meta_tags")) {
                MetaTag tag;
                auto scheme = meta_scheme_from_string(t.at(0).get<std::string>());
                if (!scheme) return Error{"bad-manifest", dir + ": bad meta scheme"};
                tag.scheme = *scheme;
                tag.key = t.at(1).get<std::string>();
                tag.value = t.at(2).get<std::string>();
                d.meta_tags.push_back(std::move(tag));
            }
            const bool searchable = jd.at("searchable").get<bool>();
            const std::string fname = jd.at("text_file").get<std::string>();
            auto body = parse_blocks_file((fs::path(dir) / fname).string(), searchable);
            if (!body.ok()) return body.error();
            d.body = std::move(body).value();
            snap.documents.push_back(std::move(d));
        }
        // "one URL per document"
        std::vector<std::string> urls;
        for (const auto& d : snap.documents) urls.push_back(d.url);
        std::sort(urls.begin(), urls.end());
        if (std::adjacent_find(urls.begin(), urls.end()) != urls.end()) {
            return Error{"duplicate-url", dir + ": snapshot lists a URL twice"};
        }
        return snap;
    } catch (const std::exception& e) {
        return Error{"bad-manifest", dir + ": " + e.what()};
    }
}

Result<std::vector<SourceSnapshot>> read_snapshot_tree(const std::string& root) {
    std::vector<SourceSnapshot> out;
    std::error_code ec;
    if (!fs::is_directory(root, ec)) return Error{"io-error", "not a directory: " + root};

    std::vector<std::string> dirs;
    if (fs::exists(fs::path(root) / "manifest.json")) {
        dirs.push_back(root);
    } else {
        for (const auto& entry : fs::directory_iterator(root, ec)) {
            if (entry.is_directory() && fs::exists(entry.path() / "manifest.json")) {
                dirs.push_back(entry.path().string());
            }
        }
    }
    std::sort(dirs.begin(), dirs.end());
    for (const auto& dir : dirs) {
        auto snap = read_snapshot(dir);
        if (!snap.ok()) return snap.error();
        out.push_back(std::move(snap).value());
    }
    std::stable_sort(out.begin(), out.end(), [](const SourceSnapshot& a, const SourceSnapshot& b) {
        if (a.snapshot_date != b.snapshot_date) return a.snapshot_date < b.snapshot_date;
        return a.domain < b.domain;
    });
    return out;
}

}  // namespace scholarlite
