#pragma once

#include "sectorfolio/market_data.hpp"
#include "sectorfolio/portfolio.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace sectorfolio
{
    /// How capital is split across stocks.
    enum class AllocationMode
    {
        simplex,      ///< amount_i = w_i * capital
        fixed_amount  ///< amount_i = capital / nominal_size, one slot per listed stock
    };

    AllocationMode parse_allocation_mode(std::string_view text);
    std::string_view to_string(AllocationMode mode) noexcept;

    using PriceMap = std::map<std::string, double, std::less<>>;

    struct Allocation
    {
        std::string ticker;
        double weight = 0.0;
        double amount_invested = 0.0;
        double shares = 0.0;  ///< fractional, never rounded
        double buy_price = 0.0;
        double sell_price = 0.0;
        double terminal_value = 0.0;
    };

    struct BacktestReport
    {
        std::vector<Allocation> allocations;
        double initial_capital = 0.0;   ///< capital actually deployed
        double terminal_capital = 0.0;
        double holding_return = 0.0;    ///< terminal / initial - 1
    };

    struct BacktestOptions
    {
        double capital = 100000.0;
        AllocationMode mode = AllocationMode::simplex;
        /// Slot count for fixed_amount mode; must be >= the number of stocks.
        std::size_t nominal_size = 10;
    };

    /// Buy at `buy_prices`, sell at `sell_prices`, no rebalancing or costs.
    BacktestReport run_backtest(const WeightVector& w, const PriceMap& buy_prices, const PriceMap& sell_prices,
                                const BacktestOptions& options = {});

    /// Buys at the first date of `test_panel`, sells at the last.
    BacktestReport backtest_from_panel(const WeightVector& w, const PricePanel& test_panel,
                                       const BacktestOptions& options = {});

    /// Writes the per-stock table followed by a TOTAL row carrying the percentage return.
    void write_backtest_csv(const BacktestReport& report, std::ostream& out);
    void write_backtest_csv(const BacktestReport& report, const std::filesystem::path& path);

    /// Reads a file produced by write_backtest_csv (values at their printed precision).
    BacktestReport read_backtest_csv(std::istream& in);

} // namespace sectorfolio
