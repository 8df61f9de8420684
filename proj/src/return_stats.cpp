#include "sectorfolio/return_stats.hpp"

#include "sectorfolio/error.hpp"

#include <algorithm>
#include <cmath>

namespace sectorfolio
{
    namespace
    {
        void require_complete(const PricePanel& panel)
        {
            if (!panel.complete())
            {
                throw Error(ErrorKind::domain, "panel has missing prices; apply the missing-data policy first");
            }
        }

        double mean(std::span<const double> xs)
        {
            double sum = 0.0;
            for (double x : xs)
            {
                sum += x;
            }
            return sum / static_cast<double>(xs.size());
        }
    } // namespace

    ReturnSeries daily_returns(const PriceSeries& series)
    {
        validate(series);
        if (series.size() < 2)
        {
            throw Error(ErrorKind::insufficient_data,
                        series.ticker + ": need at least 2 prices for a return, got " + std::to_string(series.size()));
        }
        ReturnSeries out;
        out.ticker = series.ticker;
        out.dates.assign(series.dates.begin() + 1, series.dates.end());
        out.returns.reserve(series.size() - 1);
        for (std::size_t t = 1; t < series.size(); ++t)
        {
            out.returns.push_back(series.closes[t] / series.closes[t - 1] - 1.0);
        }
        return out;
    }

    double annualize_return(std::span<const double> returns)
    {
        if (returns.empty())
        {
            throw Error(ErrorKind::insufficient_data, "cannot annualize an empty return series");
        }
        return mean(returns) * kTradingDaysPerYear;
    }

    double annualize_return(const ReturnSeries& r)
    {
        try
        {
            return annualize_return(std::span<const double>(r.returns));
        }
        catch (const Error& e)
        {
            throw Error(e.kind(), r.ticker + ": " + e.what());
        }
    }

    double daily_volatility(std::span<const double> returns)
    {
        if (returns.size() < 2)
        {
            throw Error(ErrorKind::insufficient_data, "need at least 2 returns for a standard deviation");
        }
        const double m = mean(returns);
        double ss = 0.0;
        for (double x : returns)
        {
            ss += (x - m) * (x - m);
        }
        return std::sqrt(ss / static_cast<double>(returns.size() - 1));
    }

    double daily_volatility(const ReturnSeries& r)
    {
        try
        {
            return daily_volatility(std::span<const double>(r.returns));
        }
        catch (const Error& e)
        {
            throw Error(e.kind(), r.ticker + ": " + e.what());
        }
    }

    double annual_volatility(double daily_vol)
    {
        if (!(daily_vol >= 0.0))
        {
            throw Error(ErrorKind::domain, "daily volatility must be non-negative");
        }
        return daily_vol * std::sqrt(kTradingDaysPerYear);
    }

    AssetStats asset_stats(const ReturnSeries& r)
    {
        AssetStats s;
        s.ticker = r.ticker;
        s.annual_return = annualize_return(r);
        s.daily_volatility = daily_volatility(r);
        s.annual_volatility = annual_volatility(s.daily_volatility);
        return s;
    }

    std::vector<AssetStats> asset_stats(const PricePanel& panel)
    {
        require_complete(panel);
        std::vector<AssetStats> out;
        out.reserve(panel.num_tickers());
        for (std::size_t i = 0; i < panel.num_tickers(); ++i)
        {
            out.push_back(asset_stats(daily_returns(panel.series(i))));
        }
        return out;
    }

    Eigen::MatrixXd return_matrix(const PricePanel& panel)
    {
        require_complete(panel);
        if (panel.num_dates() < 2)
        {
            throw Error(ErrorKind::insufficient_data, "need at least 2 dates for returns");
        }
        const auto& p = panel.closes();
        const Eigen::Index n = p.rows() - 1;
        return p.bottomRows(n).cwiseQuotient(p.topRows(n)).array() - 1.0;
    }

    // ----------------------------------------------------------- covariance

    CovarianceMatrix::CovarianceMatrix(std::vector<std::string> tickers, Eigen::MatrixXd daily)
        : tickers_(std::move(tickers)), daily_(std::move(daily))
    {
        const auto n = static_cast<Eigen::Index>(tickers_.size());
        if (daily_.rows() != n || daily_.cols() != n)
        {
            throw Error(ErrorKind::alignment, "covariance matrix shape does not match ticker count");
        }
    }

    CovarianceMatrix covariance_matrix(const PricePanel& panel)
    {
        require_complete(panel);
        if (panel.num_dates() < 3)
        {
            throw Error(ErrorKind::insufficient_data,
                        "covariance needs at least 3 dates, got " + std::to_string(panel.num_dates()));
        }
        const Eigen::MatrixXd r = return_matrix(panel);
        const Eigen::MatrixXd centered = r.rowwise() - r.colwise().mean();
        Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(r.rows() - 1);
        // exact symmetry
        cov = (0.5 * (cov + cov.transpose())).eval();
        return CovarianceMatrix(panel.tickers(), std::move(cov));
    }

    Eigen::MatrixXd correlation_matrix(const CovarianceMatrix& cov)
    {
        const auto n = static_cast<Eigen::Index>(cov.size());
        Eigen::VectorXd sd(n);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const double v = cov.daily()(i, i);
            if (!(v > 0.0))
            {
                throw Error(ErrorKind::degenerate_asset,
                            cov.tickers()[static_cast<std::size_t>(i)] + " has zero variance; correlation undefined");
            }
            sd(i) = std::sqrt(v);
        }
        Eigen::MatrixXd corr(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            corr(i, i) = 1.0;
            for (Eigen::Index j = i + 1; j < n; ++j)
            {
                const double c = std::clamp(cov.daily()(i, j) / (sd(i) * sd(j)), -1.0, 1.0);
                corr(i, j) = c;
                corr(j, i) = c;
            }
        }
        return corr;
    }

} // namespace sectorfolio
