#pragma once

#include "sectorfolio/date.hpp"
#include "sectorfolio/market_data.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace sectorfolio
{
    inline constexpr double kTradingDaysPerYear = 250.0;

    /// Simple daily returns, `dates[k]` being the later date of each pair.
    struct ReturnSeries
    {
        std::string ticker;
        std::vector<Date> dates;
        std::vector<double> returns;

        std::size_t size() const noexcept { return returns.size(); }
    };

    /// close[t] / close[t-1] - 1. Needs at least two observations.
    ReturnSeries daily_returns(const PriceSeries& series);

    /// Mean daily return scaled to 250 trading days.
    double annualize_return(const ReturnSeries& r);
    double annualize_return(std::span<const double> returns);

    /// Sample standard deviation (n - 1 divisor). Needs at least two returns.
    double daily_volatility(const ReturnSeries& r);
    double daily_volatility(std::span<const double> returns);

    /// daily_vol * sqrt(250).
    double annual_volatility(double daily_vol);

    struct AssetStats
    {
        std::string ticker;
        double annual_return = 0.0;
        double daily_volatility = 0.0;
        double annual_volatility = 0.0;
    };

    AssetStats asset_stats(const ReturnSeries& r);

    /// Per-ticker statistics over a gap-free panel, in panel order.
    std::vector<AssetStats> asset_stats(const PricePanel& panel);

    /// Returns matrix ((dates - 1) x tickers) of a gap-free panel.
    Eigen::MatrixXd return_matrix(const PricePanel& panel);

    /**
     * @class CovarianceMatrix
     * @brief Sample covariance of daily returns, ticker-labelled.
     *
     * Entries are on the daily scale; annualized() multiplies by 250.
     */
    class CovarianceMatrix
    {
    public:
        CovarianceMatrix() = default;
        CovarianceMatrix(std::vector<std::string> tickers, Eigen::MatrixXd daily);

        const std::vector<std::string>& tickers() const noexcept { return tickers_; }
        const Eigen::MatrixXd& daily() const noexcept { return daily_; }
        Eigen::MatrixXd annualized() const { return daily_ * kTradingDaysPerYear; }
        std::size_t size() const noexcept { return tickers_.size(); }

        double operator()(std::size_t i, std::size_t j) const
        {
            return daily_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }

    private:
        std::vector<std::string> tickers_;
        Eigen::MatrixXd daily_;
    };

    /// Pairwise sample covariance of daily returns. Panel must be gap-free with >= 3 dates.
    CovarianceMatrix covariance_matrix(const PricePanel& panel);

    /// Pearson correlation from a covariance. Throws Error{degenerate_asset} on a zero variance.
    Eigen::MatrixXd correlation_matrix(const CovarianceMatrix& cov);

} // namespace sectorfolio
