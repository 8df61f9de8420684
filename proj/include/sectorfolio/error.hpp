#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sectorfolio
{
    /// Failure categories surfaced by the library. Tests and the CLI branch on these.
    enum class ErrorKind
    {
        format,               ///< unparseable input file
        missing_ticker,       ///< configured ticker absent from the data
        empty_panel,          ///< window selects no dates
        empty_universe,       ///< no tickers left to work with
        insufficient_data,    ///< too few observations for the statistic
        domain,               ///< argument outside its mathematical domain
        degenerate_asset,     ///< zero-variance asset where a positive one is required
        alignment,            ///< ticker sets or dimensions disagree
        division_degenerate,  ///< ratio with zero denominator
        empty_cloud,          ///< frontier with no samples
        degenerate_sample,    ///< frontier sample with zero risk
        empty_summary,        ///< summary requested over no results
        io,                   ///< file could not be opened / written
        network               ///< remote quote request failed
    };

    std::string_view to_string(ErrorKind kind) noexcept;

    class Error : public std::runtime_error
    {
    public:
        Error(ErrorKind kind, const std::string& message)
            : std::runtime_error(message), kind_(kind)
        {
        }

        ErrorKind kind() const noexcept { return kind_; }

    private:
        ErrorKind kind_;
    };

} // namespace sectorfolio
