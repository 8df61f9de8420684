#include "sectorfolio/date.hpp"

#include "sectorfolio/error.hpp"

#include <charconv>
#include <cstdio>

namespace sectorfolio
{
    namespace
    {
        int parse_digits(std::string_view text, std::string_view whole)
        {
            int value = 0;
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (ec != std::errc{} || ptr != text.data() + text.size())
            {
                throw Error(ErrorKind::format, "invalid date '" + std::string(whole) + "'");
            }
            return value;
        }
    } // namespace

    Date parse_date(std::string_view text)
    {
        if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        {
            throw Error(ErrorKind::format, "invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
        }
        const int y = parse_digits(text.substr(0, 4), text);
        const int m = parse_digits(text.substr(5, 2), text);
        const int d = parse_digits(text.substr(8, 2), text);
        const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                        std::chrono::day{static_cast<unsigned>(d)}};
        if (!date.ok())
        {
            throw Error(ErrorKind::format, "invalid calendar date '" + std::string(text) + "'");
        }
        return date;
    }

    std::string format_date(const Date& date)
    {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                      static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
        return buf;
    }

    DateRange parse_date_range(std::string_view text)
    {
        const auto colon = text.find(':');
        if (colon == std::string_view::npos)
        {
            throw Error(ErrorKind::format, "invalid date range '" + std::string(text) + "', expected START:END");
        }
        DateRange range{parse_date(text.substr(0, colon)), parse_date(text.substr(colon + 1))};
        if (range.empty())
        {
            throw Error(ErrorKind::domain, "date range '" + std::string(text) + "' ends before it starts");
        }
        return range;
    }

    std::string format_date_range(const DateRange& range)
    {
        return format_date(range.first) + ":" + format_date(range.last);
    }

} // namespace sectorfolio
