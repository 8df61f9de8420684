#pragma once

// Test-only helpers: brute-force oracles that never call the library's
// numeric code, random instance generators, and scratch directories.

#include "sectorfolio/date.hpp"
#include "sectorfolio/market_data.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace sectorfolio::testing
{
    /// Sample covariance of simple returns by explicit loops: O(n^2 T).
    inline std::vector<std::vector<double>> loop_covariance(const std::vector<std::vector<double>>& prices)
    {
        const std::size_t n = prices.size();
        std::vector<std::vector<double>> r(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            for (std::size_t t = 1; t < prices[i].size(); ++t)
            {
                r[i].push_back(prices[i][t] / prices[i][t - 1] - 1.0);
            }
        }
        const std::size_t T = r[0].size();
        std::vector<double> mean(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
        {
            for (double x : r[i])
            {
                mean[i] += x;
            }
            mean[i] /= static_cast<double>(T);
        }
        std::vector<std::vector<double>> cov(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
        {
            for (std::size_t j = 0; j < n; ++j)
            {
                double s = 0.0;
                for (std::size_t t = 0; t < T; ++t)
                {
                    s += (r[i][t] - mean[i]) * (r[j][t] - mean[j]);
                }
                cov[i][j] = s / static_cast<double>(T - 1);
            }
        }
        return cov;
    }

    /// Pearson correlation computed straight from price rows.
    inline double loop_pearson(const std::vector<double>& pa, const std::vector<double>& pb)
    {
        const auto cov = loop_covariance({pa, pb});
        return cov[0][1] / std::sqrt(cov[0][0] * cov[1][1]);
    }

    struct Expansion
    {
        double value = 0.0;
        std::size_t terms = 0;
    };

    /// sum_i w_i^2 s_ii + 2 sum_{i<j} w_i w_j s_ij, counting the terms.
    inline Expansion explicit_variance(const std::vector<double>& w, const Eigen::MatrixXd& cov)
    {
        Expansion e;
        const std::size_t n = w.size();
        for (std::size_t i = 0; i < n; ++i)
        {
            e.value += w[i] * w[i] * cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
            ++e.terms;
        }
        for (std::size_t i = 0; i < n; ++i)
        {
            for (std::size_t j = i + 1; j < n; ++j)
            {
                e.value += 2.0 * w[i] * w[j] * cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                ++e.terms;
            }
        }
        return e;
    }

    /// Random PSD matrix A A^T / k with A (n x k) standard normal, scaled to daily-return size.
    inline Eigen::MatrixXd random_psd(std::mt19937_64& gen, std::size_t n, double scale = 1e-4)
    {
        std::normal_distribution<double> z(0.0, 1.0);
        const auto k = static_cast<Eigen::Index>(n + 2);
        Eigen::MatrixXd a(static_cast<Eigen::Index>(n), k);
        for (Eigen::Index i = 0; i < a.size(); ++i)
        {
            a.data()[i] = z(gen);
        }
        Eigen::MatrixXd m = a * a.transpose() * (scale / static_cast<double>(k));
        return 0.5 * (m + m.transpose());
    }

    /// Random point on the simplex (normalized exponentials, occasionally sparse).
    inline std::vector<double> random_simplex(std::mt19937_64& gen, std::size_t n)
    {
        std::exponential_distribution<double> e(1.0);
        std::bernoulli_distribution drop(0.15);
        std::vector<double> w(n);
        double sum = 0.0;
        for (auto& x : w)
        {
            x = drop(gen) ? 0.0 : e(gen);
            sum += x;
        }
        if (sum == 0.0)
        {
            w[0] = sum = 1.0;
        }
        for (auto& x : w)
        {
            x /= sum;
        }
        return w;
    }

    inline std::vector<std::string> ticker_names(std::size_t n, const std::string& prefix = "T")
    {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < n; ++i)
        {
            out.push_back(prefix + std::to_string(i));
        }
        return out;
    }

    /// Consecutive calendar dates from `start`.
    inline std::vector<Date> consecutive_dates(std::size_t n, Date start = Date{std::chrono::year{2020}, std::chrono::January, std::chrono::day{1}})
    {
        std::vector<Date> out;
        auto d = std::chrono::sys_days(start);
        for (std::size_t i = 0; i < n; ++i)
        {
            out.emplace_back(d);
            d += std::chrono::days{1};
        }
        return out;
    }

    /// Geometric random-walk prices, (dates x tickers).
    inline Eigen::MatrixXd random_prices(std::mt19937_64& gen, std::size_t dates, std::size_t tickers,
                                         double daily_sigma = 0.02)
    {
        std::normal_distribution<double> z(0.0005, daily_sigma);
        std::uniform_real_distribution<double> start(10.0, 2000.0);
        Eigen::MatrixXd p(static_cast<Eigen::Index>(dates), static_cast<Eigen::Index>(tickers));
        for (Eigen::Index c = 0; c < p.cols(); ++c)
        {
            p(0, c) = start(gen);
            for (Eigen::Index r = 1; r < p.rows(); ++r)
            {
                p(r, c) = p(r - 1, c) * std::exp(z(gen));
            }
        }
        return p;
    }

    /// Fresh directory under the system temp dir, removed on destruction.
    class ScratchDir
    {
    public:
        explicit ScratchDir(const std::string& tag)
        {
            static std::uint64_t counter = 0;
            std::random_device rd;
            path_ = std::filesystem::temp_directory_path() /
                    ("sectorfolio_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
            std::filesystem::create_directories(path_);
        }
        ~ScratchDir()
        {
            std::error_code ec;
            std::filesystem::remove_all(path_, ec);
        }
        ScratchDir(const ScratchDir&) = delete;
        ScratchDir& operator=(const ScratchDir&) = delete;

        const std::filesystem::path& path() const noexcept { return path_; }
        std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

    private:
        std::filesystem::path path_;
    };

    inline void write_text(const std::filesystem::path& path, const std::string& text)
    {
        std::ofstream out(path, std::ios::binary);
        out << text;
    }

    inline std::string read_text(const std::filesystem::path& path)
    {
        std::ifstream in(path, std::ios::binary);
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }

    /// Wide-layout CSV text; NaN cells become empty.
    inline std::string wide_csv(const std::vector<std::string>& tickers, const std::vector<Date>& dates,
                                const Eigen::MatrixXd& prices)
    {
        std::string out = "date";
        for (const auto& t : tickers)
        {
            out += "," + t;
        }
        out += "\n";
        char buf[64];
        for (std::size_t r = 0; r < dates.size(); ++r)
        {
            out += format_date(dates[r]);
            for (std::size_t c = 0; c < tickers.size(); ++c)
            {
                const double v = prices(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
                out += ",";
                if (!std::isnan(v))
                {
                    std::snprintf(buf, sizeof buf, "%.17g", v);
                    out += buf;
                }
            }
            out += "\n";
        }
        return out;
    }

} // namespace sectorfolio::testing
