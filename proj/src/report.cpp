#include "sectorfolio/report.hpp"

#include "sectorfolio/csv.hpp"
#include "sectorfolio/error.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

namespace sectorfolio
{
    namespace
    {
        template <class F>
        auto run_stage(std::string_view stage, F&& f) -> decltype(f())
        {
            try
            {
                return f();
            }
            catch (const Error& e)
            {
                throw Error(e.kind(), "stage '" + std::string(stage) + "': " + e.what());
            }
        }

        std::ofstream open_output(const std::filesystem::path& path)
        {
            std::ofstream out(path, std::ios::binary);
            if (!out)
            {
                throw Error(ErrorKind::io, "cannot write " + path.string());
            }
            return out;
        }

        template <class Writer>
        std::filesystem::path write_file(const std::filesystem::path& path, Writer&& writer)
        {
            auto out = open_output(path);
            writer(out);
            out.flush();
            if (!out)
            {
                throw Error(ErrorKind::io, "failed writing " + path.string());
            }
            return path;
        }

        void ensure_dir(const std::filesystem::path& dir)
        {
            std::error_code ec;
            std::filesystem::create_directories(dir, ec);
            if (ec)
            {
                throw Error(ErrorKind::io, "cannot create output directory " + dir.string() + ": " + ec.message());
            }
        }

        void expect_header(std::istream& in, std::string_view expected, const char* what)
        {
            std::string line;
            if (!csv::read_line(in, line) || line != expected)
            {
                throw Error(ErrorKind::format, std::string("line 1: not a ") + what + " header");
            }
        }

        std::string pct(double fraction) { return csv::format_fixed(fraction * 100.0, 2); }

        void check_field(const std::string& text, const char* what)
        {
            if (text.find_first_of(",\n") != std::string::npos)
            {
                throw Error(ErrorKind::format, std::string(what) + " '" + text + "' contains a comma or newline");
            }
        }

        void write_exclusions(std::span<const Exclusion> excluded, std::ostream& out)
        {
            out << "ticker,missing_pct\n";
            for (const auto& e : excluded)
            {
                out << e.ticker << ',' << pct(e.missing_fraction) << '\n';
            }
        }

        void write_portfolio_stats(const TrainingData& t, const DesignedPortfolios& d, RiskFreeRate rf,
                                   std::ostream& out)
        {
            const auto ewp = evaluate(d.ewp, t.mu, t.cov, rf);
            const auto& mrp = d.cloud.samples[d.mrp_index];
            const auto& orp = d.cloud.samples[d.orp_index];
            out << "metric,ewp,mrp,orp\n";
            out << "annual_return_pct," << pct(ewp.annual_return) << ',' << pct(mrp.annual_return) << ','
                << pct(orp.annual_return) << '\n';
            out << "annual_risk_pct," << pct(ewp.annual_risk) << ',' << pct(mrp.annual_risk) << ','
                << pct(orp.annual_risk) << '\n';
            out << "sharpe," << csv::format_fixed(ewp.sharpe, 4) << ',' << csv::format_fixed(mrp.sharpe, 4) << ','
                << csv::format_fixed(orp.sharpe, 4) << '\n';
        }

        WeightVector pick_weights(const WeightsTable& table, PortfolioChoice choice)
        {
            const auto& column = choice == PortfolioChoice::ewp   ? table.ewp
                                 : choice == PortfolioChoice::mrp ? table.mrp
                                                                  : table.orp;
            // six printed decimals leave the sum a few 1e-7 away from one
            return WeightVector::normalized(table.tickers, column);
        }

        std::string_view choice_name(PortfolioChoice choice)
        {
            return choice == PortfolioChoice::ewp ? "ewp" : choice == PortfolioChoice::mrp ? "mrp" : "orp";
        }
    } // namespace

    std::string_view to_string(Winner w) noexcept
    {
        switch (w)
        {
        case Winner::ewp: return "EWP";
        case Winner::orp: return "ORP";
        case Winner::tie: return "TIE";
        }
        return "TIE";
    }

    Winner parse_winner(std::string_view text)
    {
        if (text == "EWP")
        {
            return Winner::ewp;
        }
        if (text == "ORP")
        {
            return Winner::orp;
        }
        if (text == "TIE")
        {
            return Winner::tie;
        }
        throw Error(ErrorKind::format, "unknown winner '" + std::string(text) + "'");
    }

    SectorResult make_sector_result(std::string sector, double ewp_test_return, double orp_test_return)
    {
        SectorResult r{std::move(sector), ewp_test_return, orp_test_return, Winner::tie};
        if (ewp_test_return > orp_test_return)
        {
            r.winner = Winner::ewp;
        }
        else if (orp_test_return > ewp_test_return)
        {
            r.winner = Winner::orp;
        }
        return r;
    }

    PortfolioChoice parse_portfolio_choice(std::string_view text)
    {
        if (text == "ewp")
        {
            return PortfolioChoice::ewp;
        }
        if (text == "mrp")
        {
            return PortfolioChoice::mrp;
        }
        if (text == "orp")
        {
            return PortfolioChoice::orp;
        }
        throw Error(ErrorKind::format, "unknown portfolio '" + std::string(text) + "', expected ewp, mrp or orp");
    }

    // ------------------------------------------------------------ pipeline parts

    UniverseConfig resolve_universe(const RunConfig& config)
    {
        auto universe = read_universe_config(config.universe_path);
        if (config.train)
        {
            universe.train = *config.train;
        }
        if (config.test)
        {
            universe.test = *config.test;
        }
        validate(universe);
        if (config.samples == 0)
        {
            throw Error(ErrorKind::domain, "sample count must be at least 1");
        }
        if (!(config.capital > 0.0))
        {
            throw Error(ErrorKind::domain, "capital must be positive");
        }
        make_risk_free_rate(config.rf);
        return universe;
    }

    TrainingData prepare_training(const RunConfig& config)
    {
        TrainingData t;
        t.universe = run_stage("config", [&] { return resolve_universe(config); });
        const auto raw = run_stage("load", [&] {
            return load_price_panel(config.prices_path, t.universe, t.universe.train);
        });
        t.clean = run_stage("missing-data", [&] { return apply_missing_data_policy(raw, config.missing_threshold); });
        t.stats = run_stage("stats", [&] { return asset_stats(t.clean.panel); });
        t.mu = expected_returns(t.stats);
        t.cov = run_stage("covariance", [&] { return covariance_matrix(t.clean.panel); });
        return t;
    }

    DesignedPortfolios design_portfolios(const TrainingData& training, const RunConfig& config)
    {
        return run_stage("frontier", [&] {
            FrontierOptions options;
            options.threads = config.threads;
            options.sampler = config.sampler;
            auto cloud = sample_frontier(training.mu, training.cov, config.samples, config.seed,
                                         make_risk_free_rate(config.rf), options);
            const auto mrp = min_risk_index(cloud);
            const auto orp = optimum_risk_index(cloud);
            return DesignedPortfolios{equal_weights(training.clean.panel.tickers()), std::move(cloud), mrp, orp};
        });
    }

    PricePanel load_test_panel(const RunConfig& config, const UniverseConfig& universe,
                               std::span<const std::string> tickers)
    {
        UniverseConfig kept = universe;
        kept.tickers.assign(tickers.begin(), tickers.end());
        const auto raw = load_price_panel(config.prices_path, kept, universe.test);
        // test-window gaps are filled, never grounds for exclusion
        return apply_missing_data_policy(raw, 1.0).panel;
    }

    BacktestOptions ewp_backtest_options(const UniverseConfig& universe, const RunConfig& config)
    {
        BacktestOptions options;
        options.capital = config.capital;
        if (universe.nominal_size)
        {
            options.mode = AllocationMode::fixed_amount;
            options.nominal_size = *universe.nominal_size;
        }
        return options;
    }

    // ---------------------------------------------------------- file formats

    void write_stats_csv(std::span<const AssetStats> stats, std::ostream& out)
    {
        out << "ticker,annual_return_pct,annual_risk_pct\n";
        for (const auto& s : stats)
        {
            out << s.ticker << ',' << pct(s.annual_return) << ',' << pct(s.annual_volatility) << '\n';
        }
    }

    std::vector<AssetStats> read_stats_csv(std::istream& in)
    {
        expect_header(in, "ticker,annual_return_pct,annual_risk_pct", "stats");
        std::vector<AssetStats> out;
        std::string line;
        std::size_t line_no = 1;
        while (csv::read_line(in, line))
        {
            ++line_no;
            if (csv::trim(line).empty())
            {
                continue;
            }
            const auto f = csv::split(line);
            if (f.size() != 3)
            {
                throw Error(ErrorKind::format, "line " + std::to_string(line_no) + ": expected 3 fields");
            }
            AssetStats s;
            s.ticker = f[0];
            s.annual_return = csv::parse_number(f[1], line_no) / 100.0;
            s.annual_volatility = csv::parse_number(f[2], line_no) / 100.0;
            s.daily_volatility = s.annual_volatility / std::sqrt(kTradingDaysPerYear);
            out.push_back(std::move(s));
        }
        return out;
    }

    void write_weights_csv(const WeightVector& ewp, const WeightVector& mrp, const WeightVector& orp,
                           std::ostream& out)
    {
        if (ewp.tickers() != mrp.tickers() || ewp.tickers() != orp.tickers())
        {
            throw Error(ErrorKind::alignment, "portfolios list different tickers");
        }
        out << "ticker,ewp,mrp,orp\n";
        for (std::size_t i = 0; i < ewp.size(); ++i)
        {
            out << ewp.tickers()[i] << ',' << csv::format_fixed(ewp[i], 6) << ',' << csv::format_fixed(mrp[i], 6)
                << ',' << csv::format_fixed(orp[i], 6) << '\n';
        }
    }

    WeightsTable read_weights_csv(std::istream& in)
    {
        expect_header(in, "ticker,ewp,mrp,orp", "weights");
        WeightsTable table;
        std::string line;
        std::size_t line_no = 1;
        while (csv::read_line(in, line))
        {
            ++line_no;
            if (csv::trim(line).empty())
            {
                continue;
            }
            const auto f = csv::split(line);
            if (f.size() != 4)
            {
                throw Error(ErrorKind::format, "line " + std::to_string(line_no) + ": expected 4 fields");
            }
            table.tickers.push_back(f[0]);
            table.ewp.push_back(csv::parse_number(f[1], line_no));
            table.mrp.push_back(csv::parse_number(f[2], line_no));
            table.orp.push_back(csv::parse_number(f[3], line_no));
        }
        return table;
    }

    void write_sector_results(std::span<const SectorResult> results, std::ostream& out)
    {
        out << "sector,ewp_test_return,orp_test_return,winner\n";
        for (const auto& r : results)
        {
            check_field(r.sector, "sector name");
            out << r.sector << ',' << csv::format_machine(r.ewp_test_return) << ','
                << csv::format_machine(r.orp_test_return) << ',' << to_string(r.winner) << '\n';
        }
    }

    std::vector<SectorResult> read_sector_results(std::istream& in)
    {
        expect_header(in, "sector,ewp_test_return,orp_test_return,winner", "sector result");
        std::vector<SectorResult> out;
        std::string line;
        std::size_t line_no = 1;
        while (csv::read_line(in, line))
        {
            ++line_no;
            if (csv::trim(line).empty())
            {
                continue;
            }
            const auto f = csv::split(line);
            if (f.size() != 4)
            {
                throw Error(ErrorKind::format, "line " + std::to_string(line_no) + ": expected 4 fields");
            }
            auto r = make_sector_result(f[0], csv::parse_number(f[1], line_no), csv::parse_number(f[2], line_no));
            if (parse_winner(f[3]) != r.winner)
            {
                throw Error(ErrorKind::format, "line " + std::to_string(line_no) + ": winner column disagrees with returns");
            }
            out.push_back(std::move(r));
        }
        return out;
    }

    SummaryCounts count_winners(std::span<const SectorResult> results)
    {
        SummaryCounts c;
        for (const auto& r : results)
        {
            (r.winner == Winner::ewp ? c.ewp_wins : r.winner == Winner::orp ? c.orp_wins : c.ties) += 1;
        }
        return c;
    }

    std::string summary_footer(const SummaryCounts& counts)
    {
        std::string text = "EWP wins: " + std::to_string(counts.ewp_wins) + ", ORP wins: " +
                           std::to_string(counts.orp_wins);
        if (counts.ties > 0)
        {
            text += ", ties: " + std::to_string(counts.ties);
        }
        return text;
    }

    // -------------------------------------------------------------- commands

    std::filesystem::path cmd_stats(const RunConfig& config)
    {
        const auto training = prepare_training(config);
        return run_stage("write", [&] {
            ensure_dir(config.out_dir);
            return write_file(config.out_dir / "stats.csv",
                              [&](std::ostream& out) { write_stats_csv(training.stats, out); });
        });
    }

    std::filesystem::path cmd_weights(const RunConfig& config)
    {
        const auto training = prepare_training(config);
        const auto designed = design_portfolios(training, config);
        return run_stage("write", [&] {
            ensure_dir(config.out_dir);
            return write_file(config.out_dir / "weights.csv", [&](std::ostream& out) {
                write_weights_csv(designed.ewp, designed.mrp(), designed.orp(), out);
            });
        });
    }

    std::filesystem::path cmd_frontier(const RunConfig& config)
    {
        const auto training = prepare_training(config);
        const auto designed = design_portfolios(training, config);
        return run_stage("write", [&] {
            ensure_dir(config.out_dir);
            return write_file(config.out_dir / "frontier.csv",
                              [&](std::ostream& out) { export_frontier(designed.cloud, out); });
        });
    }

    std::filesystem::path cmd_backtest(const RunConfig& config, PortfolioChoice choice,
                                       const std::optional<std::filesystem::path>& weights_file)
    {
        const auto universe = run_stage("config", [&] { return resolve_universe(config); });
        std::optional<WeightVector> weights;
        if (weights_file)
        {
            weights = run_stage("weights", [&] {
                std::ifstream in(*weights_file);
                if (!in)
                {
                    throw Error(ErrorKind::io, "cannot open weights file " + weights_file->string());
                }
                return pick_weights(read_weights_csv(in), choice);
            });
        }
        else
        {
            const auto training = prepare_training(config);
            const auto designed = design_portfolios(training, config);
            weights = choice == PortfolioChoice::ewp   ? designed.ewp
                      : choice == PortfolioChoice::mrp ? designed.mrp()
                                                       : designed.orp();
        }

        const auto report = run_stage("backtest", [&] {
            const auto panel = load_test_panel(config, universe, weights->tickers());
            auto options = choice == PortfolioChoice::ewp ? ewp_backtest_options(universe, config) : BacktestOptions{};
            options.capital = config.capital;
            return backtest_from_panel(*weights, panel, options);
        });
        return run_stage("write", [&] {
            ensure_dir(config.out_dir);
            return write_file(config.out_dir / ("backtest_" + std::string(choice_name(choice)) + ".csv"),
                              [&](std::ostream& out) { write_backtest_csv(report, out); });
        });
    }

    SectorResult cmd_pipeline(const RunConfig& config)
    {
        const auto training = prepare_training(config);
        const auto designed = design_portfolios(training, config);
        const auto& tickers = training.clean.panel.tickers();

        const auto [ewp_report, orp_report] = run_stage("backtest", [&] {
            const auto panel = load_test_panel(config, training.universe, tickers);
            BacktestOptions orp_options;
            orp_options.capital = config.capital;
            return std::pair{backtest_from_panel(designed.ewp, panel, ewp_backtest_options(training.universe, config)),
                             backtest_from_panel(designed.orp(), panel, orp_options)};
        });

        auto result = make_sector_result(training.universe.sector, ewp_report.holding_return,
                                         orp_report.holding_return);

        run_stage("write", [&] {
            const auto& dir = config.out_dir;
            ensure_dir(dir);
            write_file(dir / "stats.csv", [&](std::ostream& out) { write_stats_csv(training.stats, out); });
            write_file(dir / "weights.csv", [&](std::ostream& out) {
                write_weights_csv(designed.ewp, designed.mrp(), designed.orp(), out);
            });
            write_file(dir / "portfolios.csv", [&](std::ostream& out) {
                write_portfolio_stats(training, designed, make_risk_free_rate(config.rf), out);
            });
            write_file(dir / "frontier.csv", [&](std::ostream& out) { export_frontier(designed.cloud, out); });
            write_file(dir / "backtest_ewp.csv", [&](std::ostream& out) { write_backtest_csv(ewp_report, out); });
            write_file(dir / "backtest_orp.csv", [&](std::ostream& out) { write_backtest_csv(orp_report, out); });
            write_file(dir / "result.csv", [&](std::ostream& out) {
                write_sector_results(std::span<const SectorResult>(&result, 1), out);
            });
            write_file(dir / "exclusions.csv",
                       [&](std::ostream& out) { write_exclusions(training.clean.excluded, out); });
            return 0;
        });
        return result;
    }

    SummaryCounts cmd_summary(std::span<const SectorResult> results, const std::filesystem::path& out_dir)
    {
        if (results.empty())
        {
            throw Error(ErrorKind::empty_summary, "no sector results to summarize");
        }
        const auto counts = count_winners(results);
        ensure_dir(out_dir);
        write_file(out_dir / "summary.csv", [&](std::ostream& out) {
            out << "sector,ewp_return_pct,orp_return_pct,winner\n";
            for (const auto& r : results)
            {
                check_field(r.sector, "sector name");
                out << r.sector << ',' << pct(r.ewp_test_return) << ',' << pct(r.orp_test_return) << ','
                    << to_string(r.winner) << '\n';
            }
            out << "# " << summary_footer(counts) << '\n';
        });
        return counts;
    }

    std::vector<SectorResult> cmd_pipeline_all(const RunConfig& base, const std::filesystem::path& universe_dir)
    {
        std::vector<std::filesystem::path> files;
        std::error_code ec;
        for (const auto& entry : std::filesystem::directory_iterator(universe_dir, ec))
        {
            if (entry.is_regular_file() && entry.path().extension() == ".cfg")
            {
                files.push_back(entry.path());
            }
        }
        if (ec)
        {
            throw Error(ErrorKind::io, "cannot list " + universe_dir.string() + ": " + ec.message());
        }
        std::sort(files.begin(), files.end());

        std::vector<SectorResult> results;
        for (const auto& file : files)
        {
            RunConfig config = base;
            config.universe_path = file;
            config.out_dir = base.out_dir / file.stem();
            try
            {
                results.push_back(cmd_pipeline(config));
            }
            catch (const Error& e)
            {
                throw Error(e.kind(), file.filename().string() + ": " + e.what());
            }
        }
        cmd_summary(results, base.out_dir);
        return results;
    }

} // namespace sectorfolio
