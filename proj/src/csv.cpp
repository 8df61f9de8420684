#include "sectorfolio/csv.hpp"

#include "sectorfolio/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>

namespace sectorfolio::csv
{
    std::vector<std::string> split(std::string_view line)
    {
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true)
        {
            const auto comma = line.find(',', start);
            fields.emplace_back(trim(line.substr(start, comma - start)));
            if (comma == std::string_view::npos)
            {
                break;
            }
            start = comma + 1;
        }
        return fields;
    }

    std::string_view trim(std::string_view text) noexcept
    {
        const auto first = text.find_first_not_of(" \t");
        if (first == std::string_view::npos)
        {
            return {};
        }
        const auto last = text.find_last_not_of(" \t");
        return text.substr(first, last - first + 1);
    }

    double parse_number(std::string_view text, std::size_t line_no)
    {
        text = trim(text);
        if (!text.empty() && text.front() == '+')
        {
            text.remove_prefix(1);
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value))
        {
            throw Error(ErrorKind::format,
                        "line " + std::to_string(line_no) + ": invalid number '" + std::string(text) + "'");
        }
        return value;
    }

    std::string format_machine(double value)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", value);
        return buf;
    }

    std::string format_fixed(double value, int decimals)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
        std::string out = buf;
        // "-0.00" reads badly in a report
        if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos)
        {
            out.erase(0, 1);
        }
        return out;
    }

    bool read_line(std::istream& in, std::string& line)
    {
        if (!std::getline(in, line))
        {
            return false;
        }
        if (!line.empty() && line.back() == '\r')
        {
            line.pop_back();
        }
        return true;
    }

} // namespace sectorfolio::csv
