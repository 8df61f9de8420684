#include "sectorfolio/error.hpp"
#include "sectorfolio/fetch.hpp"

#include <doctest.h>
#include <httplib.h>

#include <sstream>
#include <thread>

using namespace sectorfolio;

namespace
{
    // 2022-01-03 09:15 IST, a null bar on the 4th, the 5th, and a bar at
    // 20:00 UTC on the 5th that is already the 6th in local time.
    constexpr const char* kChart = R"({"chart":{"result":[{
        "meta":{"symbol":"TCS.NS","gmtoffset":19800},
        "timestamp":[1641181500,1641267900,1641354300,1641412800],
        "indicators":{"quote":[{"close":[3817.75,null,3862.5,3900.0]}]}}],"error":null}})";

    const DateRange kJanuary = parse_date_range("2022-01-01:2022-01-31");
} // namespace

TEST_CASE("chart response: null closes skipped, dates in exchange time")
{
    const auto s = parse_chart_response(kChart, "TCS", kJanuary);
    CHECK(s.ticker == "TCS");
    REQUIRE(s.size() == 3);
    CHECK(format_date(s.dates[0]) == "2022-01-03");
    CHECK(format_date(s.dates[1]) == "2022-01-05");
    CHECK(format_date(s.dates[2]) == "2022-01-06");
    CHECK(s.closes[1] == 3862.5);

    const auto narrow = parse_chart_response(kChart, "TCS", parse_date_range("2022-01-04:2022-01-05"));
    CHECK(narrow.size() == 1);
}

TEST_CASE("chart response errors")
{
    CHECK_THROWS_AS(parse_chart_response("{not json", "X", kJanuary), Error);
    try
    {
        parse_chart_response(R"({"chart":{"result":null,"error":{"code":"Not Found"}}})", "BAD", kJanuary);
        FAIL("expected a network error");
    }
    catch (const Error& e)
    {
        CHECK(e.kind() == ErrorKind::network);
        CHECK(std::string(e.what()).find("BAD") != std::string::npos);
    }
    const auto empty = parse_chart_response(R"({"chart":{"result":[{"meta":{}}],"error":null}})", "X", kJanuary);
    CHECK(empty.size() == 0);
}

TEST_CASE("request path covers the whole last day and encodes the symbol")
{
    const auto path = chart_request_path("M&M.NS", parse_date_range("2022-01-03:2022-01-03"));
    CHECK(path == "/v8/finance/chart/M%26M.NS?period1=1641168000&period2=1641254400&interval=1d&events=history");
}

TEST_CASE("fetch against a local server")
{
    httplib::Server server;
    std::string seen_path;
    server.Get(R"(/v8/finance/chart/(.+))", [&](const httplib::Request& req, httplib::Response& res) {
        seen_path = req.matches[1];
        if (seen_path == "MISSING.NS")
        {
            res.status = 404;
            return;
        }
        res.set_content(kChart, "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread worker([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    FetchOptions options;
    options.base_url = "http://127.0.0.1:" + std::to_string(port);
    options.timeout_seconds = 5;
    const std::vector<std::string> tickers{"TCS"};
    const auto all = fetch_universe(options, tickers, kJanuary);
    REQUIRE(all.size() == 1);
    CHECK(all[0].size() == 3);
    CHECK(seen_path == "TCS.NS");

    try
    {
        fetch_daily_closes(options, "MISSING", kJanuary);
        FAIL("expected a network error");
    }
    catch (const Error& e)
    {
        CHECK(e.kind() == ErrorKind::network);
        CHECK(std::string(e.what()).find("404") != std::string::npos);
    }

    server.stop();
    worker.join();

    std::ostringstream csv;
    write_long_csv(csv, all);
    CHECK(csv.str().find("2022-01-06,TCS,3900") != std::string::npos);
}
