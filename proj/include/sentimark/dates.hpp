#pragma once

#include "sentimark/errors.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sentimark {

namespace detail {

// Proleptic Gregorian day count, days since 1970-01-01.
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);               // [0, 399]
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1; // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;          // [0, 146096]
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

constexpr void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);            // [0, 146096]
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);        // [0, 365]
    const unsigned mp = (5 * doy + 2) / 153;                             // [0, 11]
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp < 10 ? mp + 3 : mp - 9;
    y = yr + (m <= 2);
}

} // namespace detail

// Calendar date (UTC), stored as a day count since 1970-01-01.
class Date {
public:
    Date() = default;

    static Date from_days(std::int64_t days) {
        Date d;
        d.days_ = days;
        return d;
    }

    // Throws DataError on an invalid calendar triple (e.g. Feb 30).
    static Date from_ymd(std::int64_t year, unsigned month, unsigned day);

    // Strict "YYYY-MM-DD"; nullopt on any deviation.
    static std::optional<Date> parse(std::string_view iso);

    // Like parse() but throws DataError with a message naming the input.
    static Date parse_or_throw(std::string_view iso);

    std::int64_t days() const { return days_; }
    std::string to_string() const;

    // 0 = Sunday .. 6 = Saturday.
    int weekday() const {
        std::int64_t w = (days_ + 4) % 7;
        return static_cast<int>(w < 0 ? w + 7 : w);
    }

    Date operator+(std::int64_t d) const { return from_days(days_ + d); }
    Date operator-(std::int64_t d) const { return from_days(days_ - d); }
    std::int64_t operator-(Date other) const { return days_ - other.days_; }
    Date& operator++() {
        ++days_;
        return *this;
    }
    auto operator<=>(const Date&) const = default;

private:
    std::int64_t days_ = 0;
};

// Closed interval of calendar days [first, last].
struct DateRange {
    Date first;
    Date last;

    DateRange(Date f, Date l) : first(f), last(l) {
        if (l < f) throw DataError("empty date range: " + f.to_string() + " .. " + l.to_string());
    }

    std::int64_t length() const { return last - first + 1; }
    bool contains(Date d) const { return first <= d && d <= last; }
};

// UTC instant, second resolution.
struct Timestamp {
    std::int64_t seconds = 0; // since 1970-01-01T00:00:00Z

    Date utc_date() const {
        std::int64_t d = seconds / 86400;
        if (seconds < 0 && seconds % 86400 != 0) --d;
        return Date::from_days(d);
    }

    // ISO-8601 "YYYY-MM-DDThh:mm:ss" with optional fractional seconds and an
    // optional "Z" / "+hh:mm" / "-hh:mm" offset. No offset means UTC.
    // Fractional seconds are truncated.
    static std::optional<Timestamp> parse(std::string_view iso);

    std::string to_string() const; // always the "Z" form

    auto operator<=>(const Timestamp&) const = default;
};

} // namespace sentimark
