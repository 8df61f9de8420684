/**
 * @file frontier.hpp
 * @brief Monte Carlo efficient-frontier sampling and MRP / ORP selection.
 *
 * Each sample draws a random long-only weight vector, then records the
 * annual return, annual risk and Sharpe ratio of that portfolio. The
 * minimum-risk portfolio (MRP) is the leftmost sample, the optimum-risk
 * portfolio (ORP) the one with the highest Sharpe ratio. Ties go to the
 * earliest sample index.
 *
 * Sample i is generated from a stream seeded by (seed, i) alone, so a cloud
 * is bitwise identical for any worker-thread count.
 */

#pragma once

#include "sectorfolio/portfolio.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sectorfolio
{
    inline constexpr std::size_t kDefaultSampleCount = 10000;

    /// SplitMix64 stream keyed by (seed, stream index).
    class SampleRng
    {
    public:
        SampleRng(std::uint64_t seed, std::uint64_t stream) noexcept;

        std::uint64_t next() noexcept;

        /// Uniform on the open interval (0, 1).
        double uniform() noexcept;

    private:
        std::uint64_t state_;
    };

    enum class WeightSampler
    {
        uniform_normalized,  ///< n uniforms divided by their sum
        flat_dirichlet       ///< n unit exponentials divided by their sum, i.e. Dirichlet(1, ..., 1)
    };

    /// Fills `out` with one simplex draw.
    void draw_weights(WeightSampler sampler, SampleRng& rng, std::span<double> out);

    struct FrontierSample
    {
        std::vector<double> weights;
        double annual_return = 0.0;
        double annual_risk = 0.0;
        double sharpe = 0.0;  ///< NaN when annual_risk is zero
    };

    struct FrontierCloud
    {
        std::vector<std::string> tickers;
        std::vector<FrontierSample> samples;
        std::uint64_t seed = 0;
        RiskFreeRate rf{};
        WeightSampler sampler = WeightSampler::uniform_normalized;

        std::size_t sample_count() const noexcept { return samples.size(); }
        WeightVector weight_vector(const FrontierSample& s) const { return WeightVector(tickers, s.weights); }
    };

    struct FrontierOptions
    {
        std::size_t threads = 1;
        WeightSampler sampler = WeightSampler::uniform_normalized;
    };

    FrontierCloud sample_frontier(const ExpectedReturns& mu, const CovarianceMatrix& cov, std::size_t n_samples,
                                  std::uint64_t seed, RiskFreeRate rf = {}, const FrontierOptions& options = {});

    /// Index of the smallest-risk sample (first wins on ties).
    std::size_t min_risk_index(const FrontierCloud& cloud);

    /// Index of the largest-Sharpe sample (first wins on ties).
    std::size_t optimum_risk_index(const FrontierCloud& cloud);

    const FrontierSample& min_risk_portfolio(const FrontierCloud& cloud);
    const FrontierSample& optimum_risk_portfolio(const FrontierCloud& cloud);

    /// Writes `risk,return,sharpe,<ticker>...,flag`; flag is MRP, ORP, MRP+ORP or empty.
    void export_frontier(const FrontierCloud& cloud, std::ostream& out);
    void export_frontier(const FrontierCloud& cloud, const std::filesystem::path& path);

    struct FrontierRow
    {
        double risk = 0.0;
        double ret = 0.0;
        double sharpe = 0.0;
        std::vector<double> weights;
        std::string flag;
    };

    struct FrontierTable
    {
        std::vector<std::string> tickers;
        std::vector<FrontierRow> rows;
    };

    FrontierTable read_frontier(std::istream& in);

} // namespace sectorfolio
