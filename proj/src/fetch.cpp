#include "sectorfolio/fetch.hpp"

#include "sectorfolio/error.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cctype>
#include <chrono>
#include <cstdint>
#include <map>

namespace sectorfolio
{
    namespace
    {
        using nlohmann::json;

        std::int64_t epoch_seconds(const Date& d)
        {
            return std::chrono::sys_days(d).time_since_epoch().count() * 86400LL;
        }

        Date local_date(std::int64_t timestamp, std::int64_t gmt_offset)
        {
            const std::int64_t local = timestamp + gmt_offset;
            // floor division, timestamps before 1970 included
            std::int64_t days = local / 86400;
            if (local % 86400 < 0)
            {
                --days;
            }
            return Date{std::chrono::sys_days{std::chrono::days{days}}};
        }

        std::string percent_encode(std::string_view text)
        {
            static constexpr char hex[] = "0123456789ABCDEF";
            std::string out;
            for (unsigned char c : text)
            {
                if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~')
                {
                    out += static_cast<char>(c);
                }
                else
                {
                    out += '%';
                    out += hex[c >> 4];
                    out += hex[c & 0xF];
                }
            }
            return out;
        }
    } // namespace

    std::string chart_request_path(std::string_view symbol, const DateRange& range)
    {
        const auto start = epoch_seconds(range.first);
        const auto end = epoch_seconds(Date{std::chrono::sys_days(range.last) + std::chrono::days{1}});
        return "/v8/finance/chart/" + percent_encode(symbol) + "?period1=" + std::to_string(start) +
               "&period2=" + std::to_string(end) + "&interval=1d&events=history";
    }

    PriceSeries parse_chart_response(std::string_view body, const std::string& ticker, const DateRange& range)
    {
        PriceSeries series;
        series.ticker = ticker;
        try
        {
            const auto doc = json::parse(body);
            const auto& chart = doc.at("chart");
            if (chart.contains("error") && !chart["error"].is_null())
            {
                throw Error(ErrorKind::network, ticker + ": quote API error: " + chart["error"].dump());
            }
            const auto& result = chart.at("result").at(0);
            const std::int64_t offset = result.at("meta").value("gmtoffset", std::int64_t{0});
            if (!result.contains("timestamp"))
            {
                return series;  // no trading days in range
            }
            const auto& stamps = result.at("timestamp");
            const auto& closes = result.at("indicators").at("quote").at(0).at("close");
            if (stamps.size() != closes.size())
            {
                throw Error(ErrorKind::format, ticker + ": timestamp and close arrays differ in length");
            }
            std::map<Date, double> by_date;
            for (std::size_t i = 0; i < stamps.size(); ++i)
            {
                if (closes[i].is_null())
                {
                    continue;
                }
                const double close = closes[i].get<double>();
                const Date d = local_date(stamps[i].get<std::int64_t>(), offset);
                if (close > 0.0 && range.contains(d))
                {
                    by_date[d] = close;  // a repeated date keeps the later bar
                }
            }
            for (const auto& [d, c] : by_date)
            {
                series.dates.push_back(d);
                series.closes.push_back(c);
            }
        }
        catch (const json::exception& e)
        {
            throw Error(ErrorKind::format, ticker + ": malformed quote response: " + e.what());
        }
        return series;
    }

    PriceSeries fetch_daily_closes(const FetchOptions& options, const std::string& ticker, const DateRange& range)
    {
        httplib::Client client(options.base_url);
        client.set_connection_timeout(options.timeout_seconds, 0);
        client.set_read_timeout(options.timeout_seconds, 0);
        client.set_follow_location(true);
        const httplib::Headers headers{{"User-Agent", "Mozilla/5.0 (sectorfolio)"}};

        const auto path = chart_request_path(ticker + options.symbol_suffix, range);
        const auto response = client.Get(path, headers);
        if (!response)
        {
            throw Error(ErrorKind::network,
                        ticker + ": request failed: " + httplib::to_string(response.error()));
        }
        if (response->status != 200)
        {
            throw Error(ErrorKind::network, ticker + ": HTTP " + std::to_string(response->status));
        }
        return parse_chart_response(response->body, ticker, range);
    }

    std::vector<PriceSeries> fetch_universe(const FetchOptions& options, std::span<const std::string> tickers,
                                            const DateRange& range)
    {
        std::vector<PriceSeries> out;
        out.reserve(tickers.size());
        for (const auto& t : tickers)
        {
            out.push_back(fetch_daily_closes(options, t, range));
        }
        return out;
    }

} // namespace sectorfolio
