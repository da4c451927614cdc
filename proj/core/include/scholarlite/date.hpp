#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace scholarlite {

/// Calendar date (proleptic Gregorian). Wire format is ISO-8601 YYYY-MM-DD.
struct Date {
    int year = 0;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    bool valid() const;

    /// Days since the civil epoch 1970-01-01 (negative before it).
    std::int64_t serial() const;

    std::string to_iso() const;
    static std::optional<Date> from_iso(const std::string& text);
};

/// Whole days from `from` to `to` (positive when `to` is later).
std::int64_t days_between(const Date& from, const Date& to);

}  // namespace scholarlite
