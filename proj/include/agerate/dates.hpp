#pragma once

#include "agerate/errors.hpp"

#include <compare>
#include <cstdio>
#include <string>

namespace agerate {

/// Calendar month (UTC); the monthly aggregation key.
struct YearMonth {
    int year = 0;
    int month = 0; // 1..12

    auto operator<=>(const YearMonth &) const = default;

    int index() const { return year * 12 + (month - 1); }

    YearMonth plus_months(int n) const {
        int idx = index() + n;
        int y = idx / 12, m = idx % 12;
        if (m < 0) {
            m += 12;
            --y;
        }
        return {y, m + 1};
    }

    std::string str() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
        return buf;
    }

    static YearMonth parse(const std::string &s);
};

/// Calendar date, ISO "YYYY-MM-DD". Only ordering and the month key are
/// needed, so no day-count arithmetic lives here.
struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    auto operator<=>(const Date &) const = default;

    YearMonth year_month() const { return {year, month}; }

    std::string str() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
        return buf;
    }

    static Date parse(const std::string &s);
};

inline Date Date::parse(const std::string &s) {
    int y = 0, m = 0, d = 0;
    if (std::sscanf(s.c_str(), "%d-%d-%d", &y, &m, &d) != 3 || m < 1 || m > 12 || d < 1 ||
        d > 31) {
        throw ValidationError("bad_date", "invalid date: '" + s + "'");
    }
    return {y, m, d};
}

inline YearMonth YearMonth::parse(const std::string &s) {
    int y = 0, m = 0;
    if (std::sscanf(s.c_str(), "%d-%d", &y, &m) != 2 || m < 1 || m > 12) {
        throw ValidationError("bad_month", "invalid month: '" + s + "'");
    }
    return {y, m};
}

} // namespace agerate
