#pragma once

#include "sectorfolio/return_stats.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace sectorfolio
{
    /// Tolerance on the weight sum accepted by WeightVector.
    inline constexpr double kSimplexTolerance = 1e-9;

    /**
     * @class WeightVector
     * @brief Long-only portfolio weights on the unit simplex.
     *
     * Construction enforces w_i >= 0 and |sum(w) - 1| <= 1e-9. Weights read
     * from rounded tables can use normalized(), which rescales by the sum.
     */
    class WeightVector
    {
    public:
        WeightVector(std::vector<std::string> tickers, std::vector<double> weights);

        /// Rescales non-negative `raw` weights to sum to one.
        static WeightVector normalized(std::vector<std::string> tickers, std::vector<double> raw);

        const std::vector<std::string>& tickers() const noexcept { return tickers_; }
        const std::vector<double>& weights() const noexcept { return weights_; }
        std::size_t size() const noexcept { return weights_.size(); }
        double operator[](std::size_t i) const { return weights_[i]; }

        Eigen::Map<const Eigen::VectorXd> as_vector() const
        {
            return {weights_.data(), static_cast<Eigen::Index>(weights_.size())};
        }

    private:
        std::vector<std::string> tickers_;
        std::vector<double> weights_;
    };

    /// 1/n on each ticker.
    WeightVector equal_weights(std::span<const std::string> tickers);

    /// Ticker-labelled annual expected returns.
    struct ExpectedReturns
    {
        std::vector<std::string> tickers;
        Eigen::VectorXd annual;
    };

    ExpectedReturns expected_returns(std::span<const AssetStats> stats);

    struct RiskFreeRate
    {
        double rate = 0.01;
    };

    /// Throws Error{domain} for a negative or non-finite rate.
    RiskFreeRate make_risk_free_rate(double rate);

    struct PortfolioStats
    {
        double annual_return = 0.0;
        double annual_risk = 0.0;
        double sharpe = 0.0;
    };

    /// sum_i w_i * mu_i.
    double portfolio_return(const WeightVector& w, const ExpectedReturns& mu);

    /// w' Sigma w on the daily scale.
    double portfolio_variance(const WeightVector& w, const CovarianceMatrix& cov);

    /// sqrt(250 * w' Sigma w).
    double portfolio_annual_risk(const WeightVector& w, const CovarianceMatrix& cov);

    /// (annual_return - rf) / annual_risk. Throws Error{division_degenerate} when risk is zero.
    double sharpe_ratio(double annual_return, double annual_risk, RiskFreeRate rf = {});

    PortfolioStats evaluate(const WeightVector& w, const ExpectedReturns& mu, const CovarianceMatrix& cov,
                            RiskFreeRate rf = {});

} // namespace sectorfolio
