/**
 * @file market_data.hpp
 * @brief Close-price ingestion, date alignment and missing-data handling.
 *
 * Two file layouts are accepted:
 *   - long:  header `date,ticker,close`, one observation per row;
 *   - wide:  header `date,<T1>,<T2>,...`, one trading date per row, an empty
 *            cell marks a missing observation.
 *
 * A loaded PricePanel is aligned on the union of dates on which at least one
 * requested ticker traded; cells with no observation hold NaN until
 * apply_missing_data_policy() fills or drops them.
 */

#pragma once

#include "sectorfolio/date.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sectorfolio
{
    /// Daily close observations for one ticker, dates strictly increasing.
    struct PriceSeries
    {
        std::string ticker;
        std::vector<Date> dates;
        std::vector<double> closes;

        std::size_t size() const noexcept { return closes.size(); }
    };

    /// Throws Error{domain} when dates are not strictly increasing or a close is
    /// not a positive finite number.
    void validate(const PriceSeries& series);

    /**
     * @class PricePanel
     * @brief Date-aligned close prices, one column per ticker.
     *
     * The matrix is (dates x tickers). Missing observations are NaN; gaps()
     * reports how many each ticker had when the panel was built.
     */
    class PricePanel
    {
    public:
        PricePanel() = default;
        PricePanel(std::vector<std::string> tickers, std::vector<Date> dates, Eigen::MatrixXd closes);

        const std::vector<std::string>& tickers() const noexcept { return tickers_; }
        const std::vector<Date>& dates() const noexcept { return dates_; }
        const Eigen::MatrixXd& closes() const noexcept { return closes_; }
        const std::vector<std::size_t>& gaps() const noexcept { return gaps_; }

        std::size_t num_tickers() const noexcept { return tickers_.size(); }
        std::size_t num_dates() const noexcept { return dates_.size(); }

        /// True when no cell is missing.
        bool complete() const noexcept;

        /// Column index of `ticker`, if present.
        std::optional<std::size_t> index_of(std::string_view ticker) const;

        /// Observed closes of column `i` (missing cells skipped).
        PriceSeries series(std::size_t i) const;

        /// Panel restricted to `keep`, in that order. Throws Error{missing_ticker}.
        PricePanel select(std::span<const std::string> keep) const;

        /// Rows whose date lies within `window`. Throws Error{empty_panel} if none.
        PricePanel restrict(const DateRange& window) const;

    private:
        std::vector<std::string> tickers_;
        std::vector<Date> dates_;
        Eigen::MatrixXd closes_;
        std::vector<std::size_t> gaps_;
    };

    /// A sector's stock list plus its training / test windows.
    struct UniverseConfig
    {
        std::string sector;
        std::vector<std::string> tickers;
        DateRange train{};
        DateRange test{};
        /// Index contribution in percent. Carried for reporting only.
        std::map<std::string, double> contribution;
        /// When set, the equal-weight backtest gives each stock capital / nominal_size.
        std::optional<std::size_t> nominal_size;
    };

    /// Throws Error{domain} on an empty ticker list, duplicates, or overlapping windows.
    void validate(const UniverseConfig& config);

    /**
     * Reads a universe file: `key = value` lines, `#` comments.
     *
     *     sector = Auto
     *     tickers = M&M, MARUTI, TATAMOTORS
     *     train = 2017-01-01:2021-12-31
     *     test = 2022-01-01:2022-12-31
     *     nominal_size = 10              (optional)
     *     contribution.M&M = 20.08       (optional, any number of these)
     */
    UniverseConfig read_universe_config(std::istream& in);
    UniverseConfig read_universe_config(const std::filesystem::path& path);

    /// Parses either accepted layout into per-ticker series, in first-seen ticker order.
    std::vector<PriceSeries> read_price_file(std::istream& in);

    /// Writes series in the long layout, rows ordered by date then by series order.
    void write_long_csv(std::ostream& out, std::span<const PriceSeries> series);

    /// Loads `universe.tickers` restricted to `window` and aligns them on a common date axis.
    PricePanel load_price_panel(std::istream& in, const UniverseConfig& universe, const DateRange& window);
    PricePanel load_price_panel(const std::filesystem::path& path, const UniverseConfig& universe,
                                const DateRange& window);

    /// Aligns already-parsed series (same semantics as load_price_panel).
    PricePanel align_series(std::span<const PriceSeries> series, std::span<const std::string> tickers,
                            const DateRange& window);

    struct Exclusion
    {
        std::string ticker;
        double missing_fraction = 0.0;
    };

    struct CleanPanel
    {
        PricePanel panel;
        std::vector<Exclusion> excluded;
    };

    inline constexpr double kDefaultMissingThreshold = 0.30;

    /**
     * Drops every ticker whose missing fraction is strictly greater than
     * `threshold`, then fills the remaining gaps: forward from the last
     * observation, or backward from the first one for a leading gap.
     */
    CleanPanel apply_missing_data_policy(const PricePanel& panel, double threshold = kDefaultMissingThreshold);

} // namespace sectorfolio
