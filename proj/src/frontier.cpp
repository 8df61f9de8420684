#include "sectorfolio/frontier.hpp"

#include "sectorfolio/csv.hpp"
#include "sectorfolio/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <thread>

namespace sectorfolio
{
    namespace
    {
        constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

        constexpr std::uint64_t mix64(std::uint64_t z) noexcept
        {
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            return z ^ (z >> 31);
        }

        FrontierSample make_sample(const ExpectedReturns& mu, const CovarianceMatrix& cov, RiskFreeRate rf,
                                   std::vector<double> weights)
        {
            const WeightVector w(cov.tickers(), std::move(weights));
            FrontierSample s;
            s.annual_return = portfolio_return(w, mu);
            s.annual_risk = portfolio_annual_risk(w, cov);
            s.sharpe = s.annual_risk > 0.0 ? sharpe_ratio(s.annual_return, s.annual_risk, rf)
                                           : std::numeric_limits<double>::quiet_NaN();
            s.weights = w.weights();
            return s;
        }

        void require_samples(const FrontierCloud& cloud)
        {
            if (cloud.samples.empty())
            {
                throw Error(ErrorKind::empty_cloud, "frontier cloud has no samples");
            }
        }

        std::string flag_for(std::size_t i, std::size_t mrp, std::optional<std::size_t> orp)
        {
            const bool is_mrp = i == mrp;
            const bool is_orp = orp && *orp == i;
            if (is_mrp && is_orp)
            {
                return "MRP+ORP";
            }
            return is_mrp ? "MRP" : is_orp ? "ORP" : "";
        }
    } // namespace

    SampleRng::SampleRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : state_(mix64(seed ^ mix64(stream * kGolden + 0xD1B54A32D192ED03ULL)))
    {
    }

    std::uint64_t SampleRng::next() noexcept
    {
        state_ += kGolden;
        return mix64(state_);
    }

    double SampleRng::uniform() noexcept
    {
        // 53 random bits, shifted half a step off zero
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    void draw_weights(WeightSampler sampler, SampleRng& rng, std::span<double> out)
    {
        double sum = 0.0;
        for (double& w : out)
        {
            const double u = rng.uniform();
            w = sampler == WeightSampler::flat_dirichlet ? -std::log(u) : u;
            sum += w;
        }
        for (double& w : out)
        {
            w /= sum;
        }
    }

    FrontierCloud sample_frontier(const ExpectedReturns& mu, const CovarianceMatrix& cov, std::size_t n_samples,
                                  std::uint64_t seed, RiskFreeRate rf, const FrontierOptions& options)
    {
        if (n_samples == 0)
        {
            throw Error(ErrorKind::empty_cloud, "sample count must be at least 1");
        }
        if (mu.tickers != cov.tickers() || static_cast<std::size_t>(mu.annual.size()) != cov.size())
        {
            throw Error(ErrorKind::alignment, "expected returns and covariance list different tickers");
        }
        if (cov.size() == 0)
        {
            throw Error(ErrorKind::empty_universe, "cannot sample a frontier over no assets");
        }

        FrontierCloud cloud;
        cloud.tickers = cov.tickers();
        cloud.seed = seed;
        cloud.rf = rf;
        cloud.sampler = options.sampler;
        cloud.samples.resize(n_samples);

        const std::size_t n_assets = cov.size();
        auto fill = [&](std::size_t begin, std::size_t end) {
            std::vector<double> w(n_assets);
            for (std::size_t i = begin; i < end; ++i)
            {
                SampleRng rng(seed, i);
                draw_weights(options.sampler, rng, w);
                cloud.samples[i] = make_sample(mu, cov, rf, w);
            }
        };

        const std::size_t workers = std::clamp<std::size_t>(options.threads, 1, n_samples);
        if (workers == 1)
        {
            fill(0, n_samples);
            return cloud;
        }
        {
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            const std::size_t chunk = (n_samples + workers - 1) / workers;
            for (std::size_t begin = 0; begin < n_samples; begin += chunk)
            {
                pool.emplace_back(fill, begin, std::min(n_samples, begin + chunk));
            }
        }
        return cloud;
    }

    std::size_t min_risk_index(const FrontierCloud& cloud)
    {
        require_samples(cloud);
        std::size_t best = 0;
        for (std::size_t i = 1; i < cloud.samples.size(); ++i)
        {
            if (cloud.samples[i].annual_risk < cloud.samples[best].annual_risk)
            {
                best = i;
            }
        }
        return best;
    }

    std::size_t optimum_risk_index(const FrontierCloud& cloud)
    {
        require_samples(cloud);
        for (std::size_t i = 0; i < cloud.samples.size(); ++i)
        {
            if (!(cloud.samples[i].annual_risk > 0.0))
            {
                throw Error(ErrorKind::degenerate_sample,
                            "sample " + std::to_string(i) + " has zero risk; Sharpe ratio undefined");
            }
        }
        std::size_t best = 0;
        for (std::size_t i = 1; i < cloud.samples.size(); ++i)
        {
            if (cloud.samples[i].sharpe > cloud.samples[best].sharpe)
            {
                best = i;
            }
        }
        return best;
    }

    const FrontierSample& min_risk_portfolio(const FrontierCloud& cloud)
    {
        return cloud.samples[min_risk_index(cloud)];
    }

    const FrontierSample& optimum_risk_portfolio(const FrontierCloud& cloud)
    {
        return cloud.samples[optimum_risk_index(cloud)];
    }

    void export_frontier(const FrontierCloud& cloud, std::ostream& out)
    {
        const std::size_t mrp = min_risk_index(cloud);
        std::optional<std::size_t> orp;
        try
        {
            orp = optimum_risk_index(cloud);
        }
        catch (const Error& e)
        {
            if (e.kind() != ErrorKind::degenerate_sample)
            {
                throw;
            }
        }

        out << "risk,return,sharpe";
        for (const auto& t : cloud.tickers)
        {
            out << ',' << t;
        }
        out << ",flag\n";
        for (std::size_t i = 0; i < cloud.samples.size(); ++i)
        {
            const auto& s = cloud.samples[i];
            out << csv::format_machine(s.annual_risk) << ',' << csv::format_machine(s.annual_return) << ','
                << (std::isnan(s.sharpe) ? std::string() : csv::format_machine(s.sharpe));
            for (double w : s.weights)
            {
                out << ',' << csv::format_machine(w);
            }
            out << ',' << flag_for(i, mrp, orp) << '\n';
        }
        if (!out)
        {
            throw Error(ErrorKind::io, "failed writing frontier data");
        }
    }

    void export_frontier(const FrontierCloud& cloud, const std::filesystem::path& path)
    {
        std::ofstream out(path);
        if (!out)
        {
            throw Error(ErrorKind::io, "cannot write " + path.string());
        }
        export_frontier(cloud, out);
    }

    FrontierTable read_frontier(std::istream& in)
    {
        std::string line;
        if (!csv::read_line(in, line))
        {
            throw Error(ErrorKind::format, "frontier file is empty");
        }
        const auto header = csv::split(line);
        if (header.size() < 5 || header[0] != "risk" || header[1] != "return" || header[2] != "sharpe" ||
            header.back() != "flag")
        {
            throw Error(ErrorKind::format, "line 1: not a frontier header");
        }
        FrontierTable table;
        table.tickers.assign(header.begin() + 3, header.end() - 1);

        std::size_t line_no = 1;
        while (csv::read_line(in, line))
        {
            ++line_no;
            if (csv::trim(line).empty())
            {
                continue;
            }
            const auto f = csv::split(line);
            if (f.size() != header.size())
            {
                throw Error(ErrorKind::format, "line " + std::to_string(line_no) + ": wrong field count");
            }
            FrontierRow row;
            row.risk = csv::parse_number(f[0], line_no);
            row.ret = csv::parse_number(f[1], line_no);
            row.sharpe = f[2].empty() ? std::numeric_limits<double>::quiet_NaN() : csv::parse_number(f[2], line_no);
            for (std::size_t c = 3; c + 1 < f.size(); ++c)
            {
                row.weights.push_back(csv::parse_number(f[c], line_no));
            }
            row.flag = f.back();
            table.rows.push_back(std::move(row));
        }
        return table;
    }

} // namespace sectorfolio
