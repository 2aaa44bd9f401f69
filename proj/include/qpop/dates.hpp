#pragma once

#include <cstdint>
#include <string>

namespace qpop {

// Proleptic Gregorian day count relative to 1970-01-01.
std::int64_t days_from_civil(int year, int month, int day);
void civil_from_days(std::int64_t days, int& year, int& month, int& day);

/// Strict ISO-8601 calendar date (YYYY-MM-DD). Throws input_error on anything else,
/// including syntactically valid but non-existent dates like 2021-02-30.
std::int64_t parse_iso_date(const std::string& text);

std::string format_iso_date(std::int64_t days);

}  // namespace qpop
