// ISO-8601 date parsing and serial-day arithmetic (proleptic Gregorian).
#pragma once

#include <string>

namespace netspect {

// Days since 1970-01-01. Howard Hinnant's civil-days algorithm.
int days_from_civil(int y, unsigned m, unsigned d);

// Strict "YYYY-MM-DD" parse with range validation. Throws ParseError.
int parse_date_serial(const std::string& iso);

bool is_valid_date(const std::string& iso);

// Calendar-day distance b - a, both ISO strings.
int date_diff_days(const std::string& a, const std::string& b);

}  // namespace netspect
