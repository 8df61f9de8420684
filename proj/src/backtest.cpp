#include "sectorfolio/backtest.hpp"

#include "sectorfolio/csv.hpp"
#include "sectorfolio/error.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

namespace sectorfolio
{
    namespace
    {
        constexpr const char* kHeader =
            "ticker,weight,buy_price,amount_invested,shares,sell_price,terminal_value,return_pct";

        double price_for(const PriceMap& prices, const std::string& ticker, const char* side)
        {
            const auto it = prices.find(ticker);
            if (it == prices.end())
            {
                throw Error(ErrorKind::alignment, std::string("no ") + side + " price for " + ticker);
            }
            if (!(it->second > 0.0) || !std::isfinite(it->second))
            {
                throw Error(ErrorKind::domain, std::string(side) + " price for " + ticker + " must be positive");
            }
            return it->second;
        }
    } // namespace

    AllocationMode parse_allocation_mode(std::string_view text)
    {
        if (text == "simplex")
        {
            return AllocationMode::simplex;
        }
        if (text == "fixed_amount" || text == "fixed-amount")
        {
            return AllocationMode::fixed_amount;
        }
        throw Error(ErrorKind::format, "unknown allocation mode '" + std::string(text) + "'");
    }

    std::string_view to_string(AllocationMode mode) noexcept
    {
        return mode == AllocationMode::simplex ? "simplex" : "fixed_amount";
    }

    BacktestReport run_backtest(const WeightVector& w, const PriceMap& buy_prices, const PriceMap& sell_prices,
                                const BacktestOptions& options)
    {
        if (!(options.capital > 0.0) || !std::isfinite(options.capital))
        {
            throw Error(ErrorKind::domain, "capital must be positive");
        }
        if (options.mode == AllocationMode::fixed_amount && options.nominal_size < w.size())
        {
            throw Error(ErrorKind::domain, "nominal size " + std::to_string(options.nominal_size) +
                                               " is smaller than the " + std::to_string(w.size()) + " stocks held");
        }

        BacktestReport report;
        report.allocations.reserve(w.size());
        const double slot = options.mode == AllocationMode::fixed_amount
                                ? options.capital / static_cast<double>(options.nominal_size)
                                : 0.0;
        for (std::size_t i = 0; i < w.size(); ++i)
        {
            Allocation a;
            a.ticker = w.tickers()[i];
            a.buy_price = price_for(buy_prices, a.ticker, "buy");
            a.sell_price = price_for(sell_prices, a.ticker, "sell");
            if (options.mode == AllocationMode::simplex)
            {
                a.weight = w[i];
                a.amount_invested = w[i] * options.capital;
            }
            else
            {
                a.weight = slot / options.capital;
                a.amount_invested = slot;
            }
            a.shares = a.amount_invested / a.buy_price;
            a.terminal_value = a.shares * a.sell_price;
            report.initial_capital += a.amount_invested;
            report.terminal_capital += a.terminal_value;
            report.allocations.push_back(std::move(a));
        }
        report.holding_return = report.terminal_capital / report.initial_capital - 1.0;
        return report;
    }

    BacktestReport backtest_from_panel(const WeightVector& w, const PricePanel& test_panel,
                                       const BacktestOptions& options)
    {
        if (test_panel.num_dates() == 0)
        {
            throw Error(ErrorKind::empty_panel, "test panel has no dates");
        }
        if (test_panel.num_dates() < 2)
        {
            throw Error(ErrorKind::insufficient_data, "test panel needs a buy date and a later sell date");
        }
        if (!test_panel.complete())
        {
            throw Error(ErrorKind::domain, "test panel has missing prices");
        }
        const auto& closes = test_panel.closes();
        const Eigen::Index last = closes.rows() - 1;
        PriceMap buy;
        PriceMap sell;
        for (std::size_t c = 0; c < test_panel.num_tickers(); ++c)
        {
            buy[test_panel.tickers()[c]] = closes(0, static_cast<Eigen::Index>(c));
            sell[test_panel.tickers()[c]] = closes(last, static_cast<Eigen::Index>(c));
        }
        return run_backtest(w, buy, sell, options);
    }

    void write_backtest_csv(const BacktestReport& report, std::ostream& out)
    {
        out << kHeader << '\n';
        double weight_sum = 0.0;
        for (const auto& a : report.allocations)
        {
            weight_sum += a.weight;
            out << a.ticker << ',' << csv::format_fixed(a.weight, 6) << ',' << csv::format_fixed(a.buy_price, 2)
                << ',' << csv::format_fixed(a.amount_invested, 2) << ',' << csv::format_fixed(a.shares, 2) << ','
                << csv::format_fixed(a.sell_price, 2) << ',' << csv::format_fixed(a.terminal_value, 2) << ",\n";
        }
        out << "TOTAL," << csv::format_fixed(weight_sum, 6) << ",," << csv::format_fixed(report.initial_capital, 2)
            << ",,," << csv::format_fixed(report.terminal_capital, 2) << ','
            << csv::format_fixed(report.holding_return * 100.0, 2) << '\n';
        if (!out)
        {
            throw Error(ErrorKind::io, "failed writing backtest report");
        }
    }

    void write_backtest_csv(const BacktestReport& report, const std::filesystem::path& path)
    {
        std::ofstream out(path);
        if (!out)
        {
            throw Error(ErrorKind::io, "cannot write " + path.string());
        }
        write_backtest_csv(report, out);
    }

    BacktestReport read_backtest_csv(std::istream& in)
    {
        std::string line;
        if (!csv::read_line(in, line) || line != kHeader)
        {
            throw Error(ErrorKind::format, "line 1: not a backtest report header");
        }
        BacktestReport report;
        bool saw_total = false;
        std::size_t line_no = 1;
        while (csv::read_line(in, line))
        {
            ++line_no;
            if (csv::trim(line).empty())
            {
                continue;
            }
            const auto f = csv::split(line);
            if (f.size() != 8)
            {
                throw Error(ErrorKind::format, "line " + std::to_string(line_no) + ": expected 8 fields");
            }
            if (f[0] == "TOTAL")
            {
                report.initial_capital = csv::parse_number(f[3], line_no);
                report.terminal_capital = csv::parse_number(f[6], line_no);
                report.holding_return = csv::parse_number(f[7], line_no) / 100.0;
                saw_total = true;
                continue;
            }
            Allocation a;
            a.ticker = f[0];
            a.weight = csv::parse_number(f[1], line_no);
            a.buy_price = csv::parse_number(f[2], line_no);
            a.amount_invested = csv::parse_number(f[3], line_no);
            a.shares = csv::parse_number(f[4], line_no);
            a.sell_price = csv::parse_number(f[5], line_no);
            a.terminal_value = csv::parse_number(f[6], line_no);
            report.allocations.push_back(std::move(a));
        }
        if (!saw_total)
        {
            throw Error(ErrorKind::format, "backtest report has no TOTAL row");
        }
        return report;
    }

} // namespace sectorfolio
