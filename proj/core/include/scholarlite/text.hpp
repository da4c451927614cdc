#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace scholarlite {

/// Lowercases, folds common Latin diacritics to ASCII, strips punctuation,
/// collapses whitespace. This is the canonical form used for title
/// similarity, surname comparison, and term matching.
std::string normalize_text(const std::string& text);

/// normalize_text, then split on whitespace.
std::vector<std::string> tokenize(const std::string& text);

std::size_t edit_distance(const std::string& a, const std::string& b);

/// 1 - dist/max(len) over normalized inputs; two empty strings count as
/// identical (similarity 1).
double title_similarity(const std::string& a, const std::string& b);

/// Suffix match on label boundaries: pattern "edu" or ".edu" matches
/// "edu", "mit.edu", "www.mit.edu"; "harvard.edu" matches
/// "adsabs.harvard.edu" but not "notharvard.edu".
bool domain_matches(const std::string& host, const std::string& pattern);

/// First standalone 4-digit token within [1500, max_year]; tokens embedded
/// in longer digit runs are skipped.
std::optional<int> first_year_token(const std::string& text, int max_year);

/// Half-up rounding to `decimals` fractional digits.
double round_half_up(double value, int decimals);

/// Half-up rounding of a count to `digits` significant digits; values with
/// fewer digits pass through unchanged.
std::int64_t round_significant(std::int64_t value, int digits);

std::string lowercase_ascii(std::string s);

}  // namespace scholarlite
