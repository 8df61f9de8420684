/**
 * @file report.hpp
 * @brief End-to-end sector runs and the cross-sector summary.
 *
 * A sector run loads the training window, drops tickers with too much
 * missing data, computes per-asset statistics and the covariance matrix,
 * builds the equal-weight portfolio and a sampled frontier (MRP, ORP), and
 * backtests EWP and ORP buy-and-hold over the test window.
 *
 * Files written by run_pipeline() into the output directory:
 *
 *   stats.csv         ticker,annual_return_pct,annual_risk_pct
 *   weights.csv       ticker,ewp,mrp,orp
 *   portfolios.csv    metric,ewp,mrp,orp  (training-period return / risk / Sharpe)
 *   frontier.csv      risk,return,sharpe,<tickers...>,flag
 *   backtest_ewp.csv  see write_backtest_csv()
 *   backtest_orp.csv
 *   result.csv        sector,ewp_test_return,orp_test_return,winner
 *   exclusions.csv    ticker,missing_pct
 *
 * Outputs depend only on the input files and the RunConfig.
 */

#pragma once

#include "sectorfolio/backtest.hpp"
#include "sectorfolio/frontier.hpp"
#include "sectorfolio/market_data.hpp"
#include "sectorfolio/portfolio.hpp"
#include "sectorfolio/return_stats.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sectorfolio
{
    struct RunConfig
    {
        std::filesystem::path universe_path;
        std::filesystem::path prices_path;
        std::optional<DateRange> train;  ///< overrides the universe file's window
        std::optional<DateRange> test;
        std::size_t samples = kDefaultSampleCount;
        std::uint64_t seed = 42;
        double rf = 0.01;
        std::filesystem::path out_dir = ".";
        std::size_t threads = 1;
        double missing_threshold = kDefaultMissingThreshold;
        double capital = 100000.0;
        WeightSampler sampler = WeightSampler::uniform_normalized;
    };

    /// Training-period inputs shared by every command.
    struct TrainingData
    {
        UniverseConfig universe;
        CleanPanel clean;
        std::vector<AssetStats> stats;
        ExpectedReturns mu;
        CovarianceMatrix cov;
    };

    struct DesignedPortfolios
    {
        WeightVector ewp;
        FrontierCloud cloud;
        std::size_t mrp_index = 0;
        std::size_t orp_index = 0;

        WeightVector mrp() const { return cloud.weight_vector(cloud.samples[mrp_index]); }
        WeightVector orp() const { return cloud.weight_vector(cloud.samples[orp_index]); }
    };

    enum class Winner
    {
        ewp,
        orp,
        tie
    };

    std::string_view to_string(Winner w) noexcept;
    Winner parse_winner(std::string_view text);

    struct SectorResult
    {
        std::string sector;
        double ewp_test_return = 0.0;
        double orp_test_return = 0.0;
        Winner winner = Winner::tie;
    };

    /// Fills in the winner: EWP iff its return is strictly higher, TIE on equality.
    SectorResult make_sector_result(std::string sector, double ewp_test_return, double orp_test_return);

    /// Resolves the universe file and window overrides, and validates the whole config.
    UniverseConfig resolve_universe(const RunConfig& config);

    TrainingData prepare_training(const RunConfig& config);
    DesignedPortfolios design_portfolios(const TrainingData& training, const RunConfig& config);

    /// Test-window panel over `tickers`, gaps filled (never excluded).
    PricePanel load_test_panel(const RunConfig& config, const UniverseConfig& universe,
                               std::span<const std::string> tickers);

    /// Equal-weight backtest options honouring the universe's nominal_size.
    BacktestOptions ewp_backtest_options(const UniverseConfig& universe, const RunConfig& config);

    // Writers / readers for the per-command files.
    void write_stats_csv(std::span<const AssetStats> stats, std::ostream& out);
    std::vector<AssetStats> read_stats_csv(std::istream& in);

    struct WeightsTable
    {
        std::vector<std::string> tickers;
        std::vector<double> ewp;
        std::vector<double> mrp;
        std::vector<double> orp;
    };

    void write_weights_csv(const WeightVector& ewp, const WeightVector& mrp, const WeightVector& orp,
                           std::ostream& out);
    WeightsTable read_weights_csv(std::istream& in);

    void write_sector_results(std::span<const SectorResult> results, std::ostream& out);
    std::vector<SectorResult> read_sector_results(std::istream& in);

    struct SummaryCounts
    {
        std::size_t ewp_wins = 0;
        std::size_t orp_wins = 0;
        std::size_t ties = 0;
    };

    SummaryCounts count_winners(std::span<const SectorResult> results);

    /// "EWP wins: 7, ORP wins: 6" (ties appended only when present).
    std::string summary_footer(const SummaryCounts& counts);

    // Commands. Each writes into config.out_dir and returns the path(s) written.
    std::filesystem::path cmd_stats(const RunConfig& config);
    std::filesystem::path cmd_weights(const RunConfig& config);
    std::filesystem::path cmd_frontier(const RunConfig& config);

    enum class PortfolioChoice
    {
        ewp,
        mrp,
        orp
    };

    PortfolioChoice parse_portfolio_choice(std::string_view text);

    /// Backtests one portfolio. Weights come from `weights_file` when given,
    /// otherwise they are designed from the training window.
    std::filesystem::path cmd_backtest(const RunConfig& config, PortfolioChoice choice,
                                       const std::optional<std::filesystem::path>& weights_file = std::nullopt);

    SectorResult cmd_pipeline(const RunConfig& config);

    /// Writes `summary.csv` into `out_dir`. Throws Error{empty_summary} on no input.
    SummaryCounts cmd_summary(std::span<const SectorResult> results, const std::filesystem::path& out_dir);

    /// Runs cmd_pipeline for every *.cfg in `universe_dir` (sorted by name), each into
    /// `out_dir/<stem>/`, then writes the summary into `out_dir`.
    std::vector<SectorResult> cmd_pipeline_all(const RunConfig& base, const std::filesystem::path& universe_dir);

} // namespace sectorfolio
