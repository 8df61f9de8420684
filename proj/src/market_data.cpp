#include "sectorfolio/market_data.hpp"

#include "sectorfolio/csv.hpp"
#include "sectorfolio/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <unordered_map>

namespace sectorfolio
{
    namespace
    {
        constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

        std::string lower(std::string_view text)
        {
            std::string out(text);
            std::transform(out.begin(), out.end(), out.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            return out;
        }

        Error format_error(std::size_t line_no, const std::string& what)
        {
            return Error(ErrorKind::format, "line " + std::to_string(line_no) + ": " + what);
        }

        Date parse_date_at(std::string_view text, std::size_t line_no)
        {
            try
            {
                return parse_date(text);
            }
            catch (const Error& e)
            {
                throw format_error(line_no, e.what());
            }
        }

        double parse_close_at(std::string_view text, std::size_t line_no)
        {
            const double value = csv::parse_number(text, line_no);
            if (!(value > 0.0))
            {
                throw format_error(line_no, "close price must be positive, got '" + std::string(text) + "'");
            }
            return value;
        }

        // Per-ticker observations keyed by date while parsing.
        struct SeriesBuilder
        {
            std::vector<std::string> order;
            std::unordered_map<std::string, std::map<Date, double>> obs;

            std::map<Date, double>& at(const std::string& ticker)
            {
                auto [it, inserted] = obs.try_emplace(ticker);
                if (inserted)
                {
                    order.push_back(ticker);
                }
                return it->second;
            }

            std::vector<PriceSeries> finish() const
            {
                std::vector<PriceSeries> out;
                out.reserve(order.size());
                for (const auto& ticker : order)
                {
                    PriceSeries s;
                    s.ticker = ticker;
                    for (const auto& [date, close] : obs.at(ticker))
                    {
                        s.dates.push_back(date);
                        s.closes.push_back(close);
                    }
                    out.push_back(std::move(s));
                }
                return out;
            }
        };

        std::vector<PriceSeries> read_long(std::istream& in, std::size_t line_no)
        {
            SeriesBuilder builder;
            std::string line;
            while (csv::read_line(in, line))
            {
                ++line_no;
                if (csv::trim(line).empty())
                {
                    continue;
                }
                const auto fields = csv::split(line);
                if (fields.size() != 3)
                {
                    throw format_error(line_no, "expected 3 fields, got " + std::to_string(fields.size()));
                }
                if (fields[1].empty())
                {
                    throw format_error(line_no, "empty ticker");
                }
                const Date date = parse_date_at(fields[0], line_no);
                const double close = parse_close_at(fields[2], line_no);
                auto& series = builder.at(fields[1]);
                if (!series.emplace(date, close).second)
                {
                    throw format_error(line_no, "duplicate observation for " + fields[1] + " on " + fields[0]);
                }
            }
            return builder.finish();
        }

        std::vector<PriceSeries> read_wide(std::istream& in, const std::vector<std::string>& header,
                                           std::size_t line_no)
        {
            SeriesBuilder builder;
            for (std::size_t c = 1; c < header.size(); ++c)
            {
                if (header[c].empty())
                {
                    throw format_error(line_no, "empty ticker in header column " + std::to_string(c + 1));
                }
                if (builder.obs.count(header[c]) != 0)
                {
                    throw format_error(line_no, "duplicate ticker " + header[c] + " in header");
                }
                builder.at(header[c]);
            }

            std::set<Date> seen;
            std::string line;
            while (csv::read_line(in, line))
            {
                ++line_no;
                if (csv::trim(line).empty())
                {
                    continue;
                }
                const auto fields = csv::split(line);
                if (fields.size() != header.size())
                {
                    throw format_error(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                                                    std::to_string(fields.size()));
                }
                const Date date = parse_date_at(fields[0], line_no);
                if (!seen.insert(date).second)
                {
                    throw format_error(line_no, "duplicate date " + fields[0]);
                }
                for (std::size_t c = 1; c < fields.size(); ++c)
                {
                    if (fields[c].empty())
                    {
                        continue;
                    }
                    builder.at(header[c]).emplace(date, parse_close_at(fields[c], line_no));
                }
            }
            return builder.finish();
        }

        std::vector<std::size_t> count_gaps(const Eigen::MatrixXd& closes)
        {
            std::vector<std::size_t> gaps(static_cast<std::size_t>(closes.cols()), 0);
            for (Eigen::Index c = 0; c < closes.cols(); ++c)
            {
                for (Eigen::Index r = 0; r < closes.rows(); ++r)
                {
                    if (std::isnan(closes(r, c)))
                    {
                        ++gaps[static_cast<std::size_t>(c)];
                    }
                }
            }
            return gaps;
        }

        std::string join(const std::vector<std::string>& items)
        {
            std::string out;
            for (const auto& s : items)
            {
                out += out.empty() ? s : ", " + s;
            }
            return out;
        }

        std::vector<std::string> split_list(std::string_view text)
        {
            std::vector<std::string> out;
            for (auto& item : csv::split(text))
            {
                if (!item.empty())
                {
                    out.push_back(std::move(item));
                }
            }
            return out;
        }

    } // namespace

    void validate(const PriceSeries& series)
    {
        if (series.dates.size() != series.closes.size())
        {
            throw Error(ErrorKind::domain, series.ticker + ": dates and closes differ in length");
        }
        for (std::size_t i = 0; i < series.size(); ++i)
        {
            if (!(series.closes[i] > 0.0) || !std::isfinite(series.closes[i]))
            {
                throw Error(ErrorKind::domain,
                            series.ticker + ": non-positive close on " + format_date(series.dates[i]));
            }
            if (i > 0 && !(series.dates[i - 1] < series.dates[i]))
            {
                throw Error(ErrorKind::domain,
                            series.ticker + ": dates not strictly increasing at " + format_date(series.dates[i]));
            }
        }
    }

    // ---------------------------------------------------------------- PricePanel

    PricePanel::PricePanel(std::vector<std::string> tickers, std::vector<Date> dates, Eigen::MatrixXd closes)
        : tickers_(std::move(tickers)), dates_(std::move(dates)), closes_(std::move(closes))
    {
        if (static_cast<std::size_t>(closes_.rows()) != dates_.size() ||
            static_cast<std::size_t>(closes_.cols()) != tickers_.size())
        {
            throw Error(ErrorKind::alignment, "price matrix shape does not match tickers x dates");
        }
        std::set<std::string_view> unique(tickers_.begin(), tickers_.end());
        if (unique.size() != tickers_.size())
        {
            throw Error(ErrorKind::domain, "duplicate ticker in panel");
        }
        for (std::size_t i = 1; i < dates_.size(); ++i)
        {
            if (!(dates_[i - 1] < dates_[i]))
            {
                throw Error(ErrorKind::domain, "panel dates not strictly increasing");
            }
        }
        for (Eigen::Index i = 0; i < closes_.size(); ++i)
        {
            const double v = closes_.data()[i];
            if (!std::isnan(v) && !(v > 0.0 && std::isfinite(v)))
            {
                throw Error(ErrorKind::domain, "panel holds a non-positive or infinite price");
            }
        }
        gaps_ = count_gaps(closes_);
    }

    bool PricePanel::complete() const noexcept
    {
        return std::all_of(gaps_.begin(), gaps_.end(), [](std::size_t g) { return g == 0; });
    }

    std::optional<std::size_t> PricePanel::index_of(std::string_view ticker) const
    {
        const auto it = std::find(tickers_.begin(), tickers_.end(), ticker);
        if (it == tickers_.end())
        {
            return std::nullopt;
        }
        return static_cast<std::size_t>(it - tickers_.begin());
    }

    PriceSeries PricePanel::series(std::size_t i) const
    {
        PriceSeries s;
        s.ticker = tickers_.at(i);
        const auto col = static_cast<Eigen::Index>(i);
        for (std::size_t r = 0; r < dates_.size(); ++r)
        {
            const double v = closes_(static_cast<Eigen::Index>(r), col);
            if (!std::isnan(v))
            {
                s.dates.push_back(dates_[r]);
                s.closes.push_back(v);
            }
        }
        return s;
    }

    PricePanel PricePanel::select(std::span<const std::string> keep) const
    {
        std::vector<std::string> missing;
        Eigen::MatrixXd out(closes_.rows(), static_cast<Eigen::Index>(keep.size()));
        for (std::size_t k = 0; k < keep.size(); ++k)
        {
            const auto idx = index_of(keep[k]);
            if (!idx)
            {
                missing.push_back(keep[k]);
                continue;
            }
            out.col(static_cast<Eigen::Index>(k)) = closes_.col(static_cast<Eigen::Index>(*idx));
        }
        if (!missing.empty())
        {
            throw Error(ErrorKind::missing_ticker, "tickers not in panel: " + join(missing));
        }
        return PricePanel({keep.begin(), keep.end()}, dates_, std::move(out));
    }

    PricePanel PricePanel::restrict(const DateRange& window) const
    {
        std::vector<Date> dates;
        std::vector<Eigen::Index> rows;
        for (std::size_t r = 0; r < dates_.size(); ++r)
        {
            if (window.contains(dates_[r]))
            {
                dates.push_back(dates_[r]);
                rows.push_back(static_cast<Eigen::Index>(r));
            }
        }
        if (dates.empty())
        {
            throw Error(ErrorKind::empty_panel, "no dates within " + format_date_range(window));
        }
        Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), closes_.cols());
        for (std::size_t k = 0; k < rows.size(); ++k)
        {
            out.row(static_cast<Eigen::Index>(k)) = closes_.row(rows[k]);
        }
        return PricePanel(tickers_, std::move(dates), std::move(out));
    }

    // ------------------------------------------------------------ UniverseConfig

    void validate(const UniverseConfig& config)
    {
        if (config.tickers.empty())
        {
            throw Error(ErrorKind::empty_universe, "universe '" + config.sector + "' lists no tickers");
        }
        std::set<std::string_view> unique(config.tickers.begin(), config.tickers.end());
        if (unique.size() != config.tickers.size())
        {
            throw Error(ErrorKind::domain, "universe '" + config.sector + "' lists a ticker twice");
        }
        if (config.train.empty() || config.test.empty())
        {
            throw Error(ErrorKind::domain, "universe '" + config.sector + "' has an empty window");
        }
        if (!(config.train.last < config.test.first))
        {
            throw Error(ErrorKind::domain,
                        "universe '" + config.sector + "': training window must end before the test window begins");
        }
        if (config.nominal_size && *config.nominal_size < config.tickers.size())
        {
            throw Error(ErrorKind::domain, "universe '" + config.sector + "': nominal_size " +
                                               std::to_string(*config.nominal_size) + " is below the ticker count");
        }
    }

    UniverseConfig read_universe_config(std::istream& in)
    {
        UniverseConfig config;
        bool has_tickers = false;
        bool has_train = false;
        bool has_test = false;
        std::string line;
        std::size_t line_no = 0;
        while (csv::read_line(in, line))
        {
            ++line_no;
            const auto text = csv::trim(line);
            if (text.empty() || text.front() == '#')
            {
                continue;
            }
            const auto eq = text.find('=');
            if (eq == std::string_view::npos)
            {
                throw format_error(line_no, "expected 'key = value'");
            }
            const std::string key = lower(csv::trim(text.substr(0, eq)));
            const std::string value(csv::trim(text.substr(eq + 1)));
            try
            {
                if (key == "sector")
                {
                    config.sector = value;
                }
                else if (key == "tickers")
                {
                    config.tickers = split_list(value);
                    has_tickers = true;
                }
                else if (key == "train")
                {
                    config.train = parse_date_range(value);
                    has_train = true;
                }
                else if (key == "test")
                {
                    config.test = parse_date_range(value);
                    has_test = true;
                }
                else if (key == "nominal_size")
                {
                    const double n = csv::parse_number(value, line_no);
                    if (n < 1.0 || n != std::floor(n))
                    {
                        throw format_error(line_no, "nominal_size must be a positive integer");
                    }
                    config.nominal_size = static_cast<std::size_t>(n);
                }
                else if (key.starts_with("contribution."))
                {
                    // keep the ticker's original case
                    const std::string ticker(csv::trim(text.substr(0, eq)).substr(13));
                    config.contribution[ticker] = csv::parse_number(value, line_no);
                }
                else
                {
                    throw format_error(line_no, "unknown key '" + key + "'");
                }
            }
            catch (const Error& e)
            {
                if (e.kind() == ErrorKind::format && std::string_view(e.what()).starts_with("line "))
                {
                    throw;
                }
                throw format_error(line_no, e.what());
            }
        }
        if (!has_tickers || !has_train || !has_test)
        {
            throw Error(ErrorKind::format, "universe file must define tickers, train and test");
        }
        validate(config);
        return config;
    }

    UniverseConfig read_universe_config(const std::filesystem::path& path)
    {
        std::ifstream in(path);
        if (!in)
        {
            throw Error(ErrorKind::io, "cannot open universe file " + path.string());
        }
        try
        {
            return read_universe_config(in);
        }
        catch (const Error& e)
        {
            throw Error(e.kind(), path.string() + ": " + e.what());
        }
    }

    // ----------------------------------------------------------------- price I/O

    std::vector<PriceSeries> read_price_file(std::istream& in)
    {
        std::string line;
        std::size_t line_no = 0;
        while (csv::read_line(in, line))
        {
            ++line_no;
            if (!csv::trim(line).empty())
            {
                break;
            }
        }
        if (csv::trim(line).empty())
        {
            throw Error(ErrorKind::format, "price file is empty");
        }
        const auto header = csv::split(line);
        if (header.size() == 3 && lower(header[0]) == "date" && lower(header[1]) == "ticker" &&
            lower(header[2]) == "close")
        {
            return read_long(in, line_no);
        }
        if (header.size() >= 2 && lower(header[0]) == "date")
        {
            return read_wide(in, header, line_no);
        }
        throw format_error(line_no, "unrecognized header; expected 'date,ticker,close' or 'date,<TICKER>,...'");
    }

    void write_long_csv(std::ostream& out, std::span<const PriceSeries> series)
    {
        std::map<Date, std::vector<std::pair<std::size_t, double>>> rows;
        for (std::size_t s = 0; s < series.size(); ++s)
        {
            validate(series[s]);
            for (std::size_t i = 0; i < series[s].size(); ++i)
            {
                rows[series[s].dates[i]].emplace_back(s, series[s].closes[i]);
            }
        }
        out << "date,ticker,close\n";
        for (const auto& [date, obs] : rows)
        {
            const auto d = format_date(date);
            for (const auto& [s, close] : obs)
            {
                out << d << ',' << series[s].ticker << ',' << csv::format_machine(close) << '\n';
            }
        }
    }

    PricePanel align_series(std::span<const PriceSeries> series, std::span<const std::string> tickers,
                            const DateRange& window)
    {
        if (tickers.empty())
        {
            throw Error(ErrorKind::empty_universe, "no tickers requested");
        }
        if (window.empty())
        {
            throw Error(ErrorKind::empty_panel, "window " + format_date_range(window) + " is empty");
        }

        std::vector<const PriceSeries*> chosen;
        std::vector<std::string> missing;
        for (const auto& t : tickers)
        {
            const auto it = std::find_if(series.begin(), series.end(),
                                         [&](const PriceSeries& s) { return s.ticker == t; });
            if (it == series.end())
            {
                missing.push_back(t);
            }
            else
            {
                chosen.push_back(&*it);
            }
        }
        if (!missing.empty())
        {
            throw Error(ErrorKind::missing_ticker, "tickers missing from price data: " + join(missing));
        }

        std::set<Date> axis;
        for (const auto* s : chosen)
        {
            for (const auto& d : s->dates)
            {
                if (window.contains(d))
                {
                    axis.insert(d);
                }
            }
        }
        if (axis.empty())
        {
            throw Error(ErrorKind::empty_panel, "no observations within " + format_date_range(window));
        }

        std::vector<Date> dates(axis.begin(), axis.end());
        Eigen::MatrixXd closes = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(dates.size()),
                                                           static_cast<Eigen::Index>(chosen.size()), kMissing);
        for (std::size_t c = 0; c < chosen.size(); ++c)
        {
            const auto& s = *chosen[c];
            for (std::size_t i = 0; i < s.size(); ++i)
            {
                if (!window.contains(s.dates[i]))
                {
                    continue;
                }
                const auto row = std::lower_bound(dates.begin(), dates.end(), s.dates[i]) - dates.begin();
                closes(row, static_cast<Eigen::Index>(c)) = s.closes[i];
            }
        }
        return PricePanel({tickers.begin(), tickers.end()}, std::move(dates), std::move(closes));
    }

    PricePanel load_price_panel(std::istream& in, const UniverseConfig& universe, const DateRange& window)
    {
        const auto series = read_price_file(in);
        return align_series(series, universe.tickers, window);
    }

    PricePanel load_price_panel(const std::filesystem::path& path, const UniverseConfig& universe,
                                const DateRange& window)
    {
        std::ifstream in(path);
        if (!in)
        {
            throw Error(ErrorKind::io, "cannot open price file " + path.string());
        }
        try
        {
            return load_price_panel(in, universe, window);
        }
        catch (const Error& e)
        {
            if (e.kind() == ErrorKind::format)
            {
                throw Error(e.kind(), path.string() + ": " + e.what());
            }
            throw;
        }
    }

    // ------------------------------------------------------ missing-data policy

    CleanPanel apply_missing_data_policy(const PricePanel& panel, double threshold)
    {
        if (!(threshold >= 0.0 && threshold <= 1.0))
        {
            throw Error(ErrorKind::domain, "missing-data threshold must lie in [0, 1]");
        }
        if (panel.num_dates() == 0)
        {
            throw Error(ErrorKind::empty_panel, "panel has no dates");
        }

        CleanPanel result;
        std::vector<std::string> kept;
        const double n_dates = static_cast<double>(panel.num_dates());
        for (std::size_t c = 0; c < panel.num_tickers(); ++c)
        {
            const double fraction = static_cast<double>(panel.gaps()[c]) / n_dates;
            if (fraction > threshold)
            {
                result.excluded.push_back({panel.tickers()[c], fraction});
            }
            else
            {
                kept.push_back(panel.tickers()[c]);
            }
        }
        if (kept.empty())
        {
            throw Error(ErrorKind::empty_universe, "every ticker exceeds the missing-data threshold");
        }

        Eigen::MatrixXd closes = panel.select(kept).closes();
        for (Eigen::Index c = 0; c < closes.cols(); ++c)
        {
            auto col = closes.col(c);
            Eigen::Index first = 0;
            while (first < col.size() && std::isnan(col(first)))
            {
                ++first;
            }
            if (first == col.size())
            {
                throw Error(ErrorKind::insufficient_data,
                            kept[static_cast<std::size_t>(c)] + " has no observations to fill from");
            }
            for (Eigen::Index r = 0; r < first; ++r)
            {
                col(r) = col(first);
            }
            for (Eigen::Index r = first + 1; r < col.size(); ++r)
            {
                if (std::isnan(col(r)))
                {
                    col(r) = col(r - 1);
                }
            }
        }
        result.panel = PricePanel(std::move(kept), panel.dates(), std::move(closes));
        return result;
    }

} // namespace sectorfolio
