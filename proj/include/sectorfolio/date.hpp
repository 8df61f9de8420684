#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace sectorfolio
{
    using Date = std::chrono::year_month_day;

    /// Parses an ISO-8601 calendar date (`YYYY-MM-DD`). Throws Error{format} on bad input.
    Date parse_date(std::string_view text);

    std::string format_date(const Date& date);

    /// Inclusive calendar range [first, last].
    struct DateRange
    {
        Date first;
        Date last;

        bool contains(const Date& d) const noexcept { return first <= d && d <= last; }
        bool empty() const noexcept { return last < first; }
    };

    /// Parses `start:end`, both ISO dates.
    DateRange parse_date_range(std::string_view text);

    std::string format_date_range(const DateRange& range);

} // namespace sectorfolio
