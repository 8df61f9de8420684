#pragma once

// Thin client for a Yahoo-style chart API. Produces PriceSeries that
// write_long_csv() turns into the canonical price file; nothing else in the
// library depends on this header.

#include "sectorfolio/date.hpp"
#include "sectorfolio/market_data.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sectorfolio
{
    struct FetchOptions
    {
        std::string base_url = "https://query1.finance.yahoo.com";
        std::string symbol_suffix = ".NS";  ///< appended to each ticker in requests
        int timeout_seconds = 30;
    };

    /// Request path for `symbol` covering `range` (daily bars).
    std::string chart_request_path(std::string_view symbol, const DateRange& range);

    /// Daily closes from a chart response body. Null closes are skipped, dates
    /// are taken in the exchange's local time and kept only if inside `range`.
    PriceSeries parse_chart_response(std::string_view body, const std::string& ticker, const DateRange& range);

    PriceSeries fetch_daily_closes(const FetchOptions& options, const std::string& ticker, const DateRange& range);

    std::vector<PriceSeries> fetch_universe(const FetchOptions& options, std::span<const std::string> tickers,
                                            const DateRange& range);

} // namespace sectorfolio
