#include "scholarlite/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>

namespace scholarlite {

namespace {

// Latin-1 supplement + a few Latin Extended-A codepoints seen in author
// names and titles, folded to ASCII.
const std::unordered_map<std::uint32_t, const char*>& diacritic_map() {
    static const std::unordered_map<std::uint32_t, const char*> m = {
        {0x00C0, "a"}, {0x00C1, "a"}, {0x00C2, "a"}, {0x00C3, "a"}, {0x00C4, "a"}, {0x00C5, "a"},
        {0x00C7, "c"}, {0x00C8, "e"}, {0x00C9, "e"}, {0x00CA, "e"}, {0x00CB, "e"},
        {0x00CC, "i"}, {0x00CD, "i"}, {0x00CE, "i"}, {0x00CF, "i"},
        {0x00D1, "n"}, {0x00D2, "o"}, {0x00D3, "o"}, {0x00D4, "o"}, {0x00D5, "o"}, {0x00D6, "o"},
        {0x00D8, "o"}, {0x00D9, "u"}, {0x00DA, "u"}, {0x00DB, "u"}, {0x00DC, "u"}, {0x00DD, "y"},
        {0x00DF, "ss"},
        {0x00E0, "a"}, {0x00E1, "a"}, {0x00E2, "a"}, {0x00E3, "a"}, {0x00E4, "a"}, {0x00E5, "a"},
        {0x00E7, "c"}, {0x00E8, "e"}, {0x00E9, "e"}, {0x00EA, "e"}, {0x00EB, "e"},
        {0x00EC, "i"}, {0x00ED, "i"}, {0x00EE, "i"}, {0x00EF, "i"},
        {0x00F1, "n"}, {0x00F2, "o"}, {0x00F3, "o"}, {0x00F4, "o"}, {0x00F5, "o"}, {0x00F6, "o"},
        {0x00F8, "o"}, {0x00F9, "u"}, {0x00FA, "u"}, {0x00FB, "u"}, {0x00FC, "u"}, {0x00FD, "y"},
        {0x00FF, "y"},
        {0x0100, "a"}, {0x0101, "a"}, {0x0107, "c"}, {0x010D, "c"}, {0x0119, "e"}, {0x011B, "e"},
        {0x0141, "l"}, {0x0142, "l"}, {0x0144, "n"}, {0x0151, "o"}, {0x0159, "r"},
        {0x015B, "s"}, {0x0161, "s"}, {0x017A, "z"}, {0x017C, "z"}, {0x017E, "z"},
    };
    return m;
}

// Decodes one UTF-8 codepoint at i; advances i. Invalid bytes yield the
// byte value itself.
std::uint32_t next_codepoint(const std::string& s, std::size_t& i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return b0;
    }
    if (i + len > s.size()) {
        ++i;
        return b0;
    }
    for (std::size_t k = 1; k < len; ++k) {
        const auto bk = static_cast<unsigned char>(s[i + k]);
        if ((bk & 0xC0) != 0x80) {
            ++i;
            return b0;
        }
        cp = (cp << 6) | (bk & 0x3F);
    }
    i += len;
    return cp;
}

}  // namespace

std::string normalize_text(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    std::size_t i = 0;
    while (i < text.size()) {
        const std::uint32_t cp = next_codepoint(text, i);
        char c = 0;
        const char* folded = nullptr;
        if (cp < 0x80) {
            c = static_cast<char>(cp);
        } else {
            auto it = diacritic_map().find(cp);
            if (it != diacritic_map().end()) {
                folded = it->second;
            } else {
                // Non-Latin codepoint: keep it verbatim so CJK titles still
                // compare; re-encode as UTF-8.
                if (pending_space && !out.empty()) out.push_back(' ');
                pending_space = false;
                std::size_t start = i;
                // Re-derive the encoded bytes by backing up: simpler to
                // re-encode from the codepoint.
                char buf[4];
                int n = 0;
                if (cp < 0x800) {
                    buf[n++] = static_cast<char>(0xC0 | (cp >> 6));
                    buf[n++] = static_cast<char>(0x80 | (cp & 0x3F));
                } else if (cp < 0x10000) {
                    buf[n++] = static_cast<char>(0xE0 | (cp >> 12));
                    buf[n++] = static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
                    buf[n++] = static_cast<char>(0x80 | (cp & 0x3F));
                } else {
                    buf[n++] = static_cast<char>(0xF0 | (cp >> 18));
                    buf[n++] = static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
                    buf[n++] = static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
                    buf[n++] = static_cast<char>(0x80 | (cp & 0x3F));
                }
                out.append(buf, static_cast<std::size_t>(n));
                (void)start;
                continue;
            }
        }
        if (folded) {
            if (pending_space && !out.empty()) out.push_back(' ');
            pending_space = false;
            out += folded;
            continue;
        }
        if (std::isalnum(static_cast<unsigned char>(c))) {
            if (pending_space && !out.empty()) out.push_back(' ');
            pending_space = false;
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else {
            pending_space = true;  // punctuation and whitespace both separate
        }
    }
    return out;
}

std::vector<std::string> tokenize(const std::string& text) {
    const std::string norm = normalize_text(text);
    std::vector<std::string> tokens;
    std::size_t pos = 0;
    while (pos < norm.size()) {
        auto space = norm.find(' ', pos);
        if (space == std::string::npos) space = norm.size();
        if (space > pos) tokens.push_back(norm.substr(pos, space - pos));
        pos = space + 1;
    }
    return tokens;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
    const std::size_t n = a.size(), m = b.size();
    if (n == 0) return m;
    if (m == 0) return n;
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

double title_similarity(const std::string& a, const std::string& b) {
    const std::string na = normalize_text(a);
    const std::string nb = normalize_text(b);
    if (na.empty() && nb.empty()) return 1.0;
    const std::size_t longest = std::max(na.size(), nb.size());
    if (longest == 0) return 1.0;
    const std::size_t dist = edit_distance(na, nb);
    return 1.0 - static_cast<double>(dist) / static_cast<double>(longest);
}

bool domain_matches(const std::string& host, const std::string& pattern) {
    std::string p = lowercase_ascii(pattern);
    while (!p.empty() && p.front() == '.') p.erase(p.begin());
    if (p.empty()) return false;
    const std::string h = lowercase_ascii(host);
    if (h == p) return true;
    if (h.size() > p.size() && h.compare(h.size() - p.size(), p.size(), p) == 0 &&
        h[h.size() - p.size() - 1] == '.') {
        return true;
    }
    return false;
}

std::optional<int> first_year_token(const std::string& text, int max_year) {
    const std::size_t n = text.size();
    std::size_t i = 0;
    while (i < n) {
        if (std::isdigit(static_cast<unsigned char>(text[i]))) {
            std::size_t j = i;
            while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            if (j - i == 4) {
                const int y = std::stoi(text.substr(i, 4));
                if (y >= 1500 && y <= max_year) return y;
            }
            i = j;
        } else {
            ++i;
        }
    }
    return std::nullopt;
}

double round_half_up(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::floor(value * scale + 0.5) / scale;
}

std::int64_t round_significant(std::int64_t value, int digits) {
    if (digits <= 0 || value == 0) return value;
    const bool neg = value < 0;
    std::uint64_t v = neg ? static_cast<std::uint64_t>(-value) : static_cast<std::uint64_t>(value);
    int ndigits = 0;
    for (std::uint64_t t = v; t > 0; t /= 10) ++ndigits;
    if (ndigits <= digits) return value;
    std::uint64_t scale = 1;
    for (int k = 0; k < ndigits - digits; ++k) scale *= 10;
    const std::uint64_t rounded = (v + scale / 2) / scale * scale;
    return neg ? -static_cast<std::int64_t>(rounded) : static_cast<std::int64_t>(rounded);
}

std::string lowercase_ascii(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace scholarlite
