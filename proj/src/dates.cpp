#include "netspect/dates.hpp"

#include <cctype>

#include "netspect/errors.hpp"

namespace netspect {

int days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);             // [0, 399]
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;   // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;            // [0, 146096]
    return era * 146097 + static_cast<int>(doe) - 719468;
}

namespace {

bool all_digits(const std::string& s, std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

}  // namespace

int parse_date_serial(const std::string& iso) {
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-' ||
        !all_digits(iso, 0, 4) || !all_digits(iso, 5, 7) || !all_digits(iso, 8, 10))
        throw ParseError("malformed date '" + iso + "', expected YYYY-MM-DD");
    const int y = std::stoi(iso.substr(0, 4));
    const int m = std::stoi(iso.substr(5, 2));
    const int d = std::stoi(iso.substr(8, 2));
    static const int mdays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m < 1 || m > 12)
        throw ParseError("invalid month in date '" + iso + "'");
    const int dmax = (m == 2 && is_leap(y)) ? 29 : mdays[m - 1];
    if (d < 1 || d > dmax)
        throw ParseError("invalid day in date '" + iso + "'");
    return days_from_civil(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

bool is_valid_date(const std::string& iso) {
    try {
        parse_date_serial(iso);
        return true;
    } catch (const ParseError&) {
        return false;
    }
}

int date_diff_days(const std::string& a, const std::string& b) {
    return parse_date_serial(b) - parse_date_serial(a);
}

}  // namespace netspect
