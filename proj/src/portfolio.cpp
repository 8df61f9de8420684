#include "sectorfolio/portfolio.hpp"

#include "sectorfolio/error.hpp"

#include <algorithm>
#include <cmath>

namespace sectorfolio
{
    namespace
    {
        void require_same_tickers(const std::vector<std::string>& a, const std::vector<std::string>& b,
                                  const char* what)
        {
            if (a != b)
            {
                throw Error(ErrorKind::alignment, std::string("weights and ") + what + " list different tickers");
            }
        }
    } // namespace

    WeightVector::WeightVector(std::vector<std::string> tickers, std::vector<double> weights)
        : tickers_(std::move(tickers)), weights_(std::move(weights))
    {
        if (tickers_.size() != weights_.size())
        {
            throw Error(ErrorKind::alignment, "weight count does not match ticker count");
        }
        if (weights_.empty())
        {
            throw Error(ErrorKind::empty_universe, "weight vector is empty");
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < weights_.size(); ++i)
        {
            if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i]))
            {
                throw Error(ErrorKind::domain, "weight for " + tickers_[i] + " is negative or not finite");
            }
            sum += weights_[i];
        }
        if (std::abs(sum - 1.0) > kSimplexTolerance)
        {
            throw Error(ErrorKind::domain, "weights sum to " + std::to_string(sum) + ", expected 1");
        }
    }

    WeightVector WeightVector::normalized(std::vector<std::string> tickers, std::vector<double> raw)
    {
        double sum = 0.0;
        for (double w : raw)
        {
            if (!(w >= 0.0) || !std::isfinite(w))
            {
                throw Error(ErrorKind::domain, "raw weights must be non-negative and finite");
            }
            sum += w;
        }
        if (!(sum > 0.0))
        {
            throw Error(ErrorKind::domain, "raw weights sum to zero");
        }
        for (double& w : raw)
        {
            w /= sum;
        }
        return WeightVector(std::move(tickers), std::move(raw));
    }

    WeightVector equal_weights(std::span<const std::string> tickers)
    {
        if (tickers.empty())
        {
            throw Error(ErrorKind::empty_universe, "cannot build an equal-weight portfolio over no tickers");
        }
        const double w = 1.0 / static_cast<double>(tickers.size());
        return WeightVector({tickers.begin(), tickers.end()}, std::vector<double>(tickers.size(), w));
    }

    ExpectedReturns expected_returns(std::span<const AssetStats> stats)
    {
        ExpectedReturns mu;
        mu.annual.resize(static_cast<Eigen::Index>(stats.size()));
        for (std::size_t i = 0; i < stats.size(); ++i)
        {
            mu.tickers.push_back(stats[i].ticker);
            mu.annual(static_cast<Eigen::Index>(i)) = stats[i].annual_return;
        }
        return mu;
    }

    RiskFreeRate make_risk_free_rate(double rate)
    {
        if (!(rate >= 0.0) || !std::isfinite(rate))
        {
            throw Error(ErrorKind::domain, "risk-free rate must be a non-negative number");
        }
        return RiskFreeRate{rate};
    }

    double portfolio_return(const WeightVector& w, const ExpectedReturns& mu)
    {
        require_same_tickers(w.tickers(), mu.tickers, "expected returns");
        if (static_cast<std::size_t>(mu.annual.size()) != w.size())
        {
            throw Error(ErrorKind::alignment, "expected-return vector has the wrong length");
        }
        return w.as_vector().dot(mu.annual);
    }

    double portfolio_variance(const WeightVector& w, const CovarianceMatrix& cov)
    {
        require_same_tickers(w.tickers(), cov.tickers(), "covariance");
        const auto x = w.as_vector();
        return x.dot(cov.daily() * x);
    }

    double portfolio_annual_risk(const WeightVector& w, const CovarianceMatrix& cov)
    {
        // a PSD matrix can still give a tiny negative quadratic form in floating point
        return std::sqrt(std::max(0.0, portfolio_variance(w, cov)) * kTradingDaysPerYear);
    }

    double sharpe_ratio(double annual_return, double annual_risk, RiskFreeRate rf)
    {
        if (!(annual_risk > 0.0))
        {
            throw Error(ErrorKind::division_degenerate, "Sharpe ratio undefined for zero risk");
        }
        return (annual_return - rf.rate) / annual_risk;
    }

    PortfolioStats evaluate(const WeightVector& w, const ExpectedReturns& mu, const CovarianceMatrix& cov,
                            RiskFreeRate rf)
    {
        PortfolioStats s;
        s.annual_return = portfolio_return(w, mu);
        s.annual_risk = portfolio_annual_risk(w, cov);
        s.sharpe = sharpe_ratio(s.annual_return, s.annual_risk, rf);
        return s;
    }

} // namespace sectorfolio
