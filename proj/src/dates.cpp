#include "sentimark/dates.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace sentimark {

namespace {

bool parse_fixed_uint(std::string_view s, std::size_t pos, std::size_t len, unsigned& out) {
    if (pos + len > s.size()) return false;
    unsigned v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        char c = s[i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + static_cast<unsigned>(c - '0');
    }
    out = v;
    return true;
}

bool days_in_month_ok(std::int64_t y, unsigned m, unsigned d) {
    static constexpr std::array<unsigned, 12> len = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m < 1 || m > 12 || d < 1) return false;
    unsigned max_d = len[m - 1];
    bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    if (m == 2 && leap) max_d = 29;
    return d <= max_d;
}

} // namespace

Date Date::from_ymd(std::int64_t year, unsigned month, unsigned day) {
    if (!days_in_month_ok(year, month, day)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "invalid date %lld-%02u-%02u", static_cast<long long>(year),
                      month, day);
        throw DataError(buf);
    }
    return from_days(detail::days_from_civil(year, month, day));
}

std::optional<Date> Date::parse(std::string_view iso) {
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return std::nullopt;
    unsigned y, m, d;
    if (!parse_fixed_uint(iso, 0, 4, y) || !parse_fixed_uint(iso, 5, 2, m) ||
        !parse_fixed_uint(iso, 8, 2, d))
        return std::nullopt;
    if (!days_in_month_ok(y, m, d)) return std::nullopt;
    return from_days(detail::days_from_civil(y, m, d));
}

Date Date::parse_or_throw(std::string_view iso) {
    auto d = parse(iso);
    if (!d) throw DataError("unparsable date '" + std::string(iso) + "' (expected YYYY-MM-DD)");
    return *d;
}

std::string Date::to_string() const {
    std::int64_t y;
    unsigned m, d;
    detail::civil_from_days(days_, y, m, d);
    char buf[48];
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02u", static_cast<long long>(y), m, d);
    return buf;
}

std::optional<Timestamp> Timestamp::parse(std::string_view iso) {
    // date part
    if (iso.size() < 19) return std::nullopt;
    auto date = Date::parse(iso.substr(0, 10));
    if (!date) return std::nullopt;
    char sep = iso[10];
    if (sep != 'T' && sep != 't' && sep != ' ') return std::nullopt;
    if (iso[13] != ':' || iso[16] != ':') return std::nullopt;
    unsigned hh, mm, ss;
    if (!parse_fixed_uint(iso, 11, 2, hh) || !parse_fixed_uint(iso, 14, 2, mm) ||
        !parse_fixed_uint(iso, 17, 2, ss))
        return std::nullopt;
    if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
    if (ss == 60) ss = 59; // leap second: clamp

    std::size_t pos = 19;
    if (pos < iso.size() && iso[pos] == '.') {
        ++pos;
        std::size_t digits = 0;
        while (pos < iso.size() && iso[pos] >= '0' && iso[pos] <= '9') {
            ++pos;
            ++digits;
        }
        if (digits == 0) return std::nullopt;
    }

    std::int64_t offset = 0; // seconds east of UTC
    if (pos < iso.size()) {
        char c = iso[pos];
        if (c == 'Z' || c == 'z') {
            ++pos;
        } else if (c == '+' || c == '-') {
            unsigned oh, om = 0;
            if (!parse_fixed_uint(iso, pos + 1, 2, oh)) return std::nullopt;
            std::size_t opos = pos + 3;
            if (opos < iso.size() && iso[opos] == ':') ++opos;
            if (opos < iso.size()) {
                if (!parse_fixed_uint(iso, opos, 2, om)) return std::nullopt;
                opos += 2;
            }
            if (oh > 23 || om > 59) return std::nullopt;
            offset = static_cast<std::int64_t>(oh) * 3600 + static_cast<std::int64_t>(om) * 60;
            if (c == '-') offset = -offset;
            pos = opos;
        }
        if (pos != iso.size()) return std::nullopt;
    }

    Timestamp t;
    t.seconds = date->days() * 86400 + static_cast<std::int64_t>(hh) * 3600 +
                static_cast<std::int64_t>(mm) * 60 + ss - offset;
    return t;
}

std::string Timestamp::to_string() const {
    std::int64_t d = seconds / 86400;
    std::int64_t rem = seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        --d;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%sT%02lld:%02lld:%02lldZ", Date::from_days(d).to_string().c_str(),
                  static_cast<long long>(rem / 3600), static_cast<long long>((rem / 60) % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

} // namespace sentimark
