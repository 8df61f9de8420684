#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sectorfolio::csv
{
    /// Splits one CSV record on commas. Quoting is not supported; none of the
    /// files this library reads or writes need it.
    std::vector<std::string> split(std::string_view line);

    std::string_view trim(std::string_view text) noexcept;

    /// Parses a decimal number; throws Error{format} naming `line_no` on failure.
    double parse_number(std::string_view text, std::size_t line_no);

    /// Up to 12 significant digits, for machine-readable files.
    std::string format_machine(double value);

    /// Fixed-point with `decimals` places, for report files.
    std::string format_fixed(double value, int decimals);

    /// Reads the next line, stripping a trailing '\r'. Returns false at EOF.
    bool read_line(std::istream& in, std::string& line);

} // namespace sectorfolio::csv
