// sectorfolio: sector portfolio design and buy-and-hold evaluation from the command line.

#include "sectorfolio/error.hpp"
#include "sectorfolio/fetch.hpp"
#include "sectorfolio/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace
{
    using namespace sectorfolio;

    struct CommonArgs
    {
        std::string universe;
        std::string prices;
        std::string train;
        std::string test;
        std::size_t samples = kDefaultSampleCount;
        std::uint64_t seed = 42;
        double rf = 0.01;
        std::string out = ".";
        std::size_t threads = 1;
        double missing_threshold = kDefaultMissingThreshold;
        double capital = 100000.0;
        std::string sampler = "uniform";
    };

    void add_common(CLI::App* cmd, CommonArgs& args, bool need_universe = true)
    {
        auto* u = cmd->add_option("--universe", args.universe, "Universe config file");
        if (need_universe)
        {
            u->required();
        }
        cmd->add_option("--prices", args.prices, "Close-price CSV (long or wide layout)")->required();
        cmd->add_option("--train", args.train, "Training window START:END (overrides the universe file)");
        cmd->add_option("--test", args.test, "Test window START:END (overrides the universe file)");
        cmd->add_option("--samples", args.samples, "Frontier sample count")->capture_default_str();
        cmd->add_option("--seed", args.seed, "Frontier RNG seed")->capture_default_str();
        cmd->add_option("--rf", args.rf, "Annual risk-free rate as a fraction")->capture_default_str();
        cmd->add_option("--out", args.out, "Output directory")->capture_default_str();
        cmd->add_option("--threads", args.threads, "Worker threads for frontier sampling")->capture_default_str();
        cmd->add_option("--missing-threshold", args.missing_threshold,
                        "Exclude tickers missing more than this fraction of dates")
            ->capture_default_str();
        cmd->add_option("--capital", args.capital, "Capital invested in each backtest")->capture_default_str();
        cmd->add_option("--sampler", args.sampler, "Weight sampler")
            ->check(CLI::IsMember({"uniform", "dirichlet"}))
            ->capture_default_str();
    }

    RunConfig to_config(const CommonArgs& args)
    {
        RunConfig config;
        config.universe_path = args.universe;
        config.prices_path = args.prices;
        if (!args.train.empty())
        {
            config.train = parse_date_range(args.train);
        }
        if (!args.test.empty())
        {
            config.test = parse_date_range(args.test);
        }
        config.samples = args.samples;
        config.seed = args.seed;
        config.rf = args.rf;
        config.out_dir = args.out;
        config.threads = args.threads;
        config.missing_threshold = args.missing_threshold;
        config.capital = args.capital;
        config.sampler = args.sampler == "dirichlet" ? WeightSampler::flat_dirichlet : WeightSampler::uniform_normalized;
        return config;
    }

    std::vector<SectorResult> read_results(const std::vector<std::string>& paths)
    {
        std::vector<SectorResult> all;
        for (const auto& p : paths)
        {
            std::ifstream in(p);
            if (!in)
            {
                throw Error(ErrorKind::io, "cannot open result file " + p);
            }
            try
            {
                auto rs = read_sector_results(in);
                all.insert(all.end(), rs.begin(), rs.end());
            }
            catch (const Error& e)
            {
                throw Error(e.kind(), p + ": " + e.what());
            }
        }
        return all;
    }

    void print_result(const SectorResult& r)
    {
        std::cout << r.sector << ": EWP " << r.ewp_test_return * 100.0 << "%, ORP " << r.orp_test_return * 100.0
                  << "%, winner " << to_string(r.winner) << '\n';
    }

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sector portfolio design (equal-weight, minimum-risk, max-Sharpe) and buy-and-hold backtests"};
    app.require_subcommand(1);

    CommonArgs stats_args;
    auto* stats = app.add_subcommand("stats", "Per-ticker annual return and risk over the training window");
    add_common(stats, stats_args);

    CommonArgs weights_args;
    auto* weights = app.add_subcommand("weights", "EWP, MRP and ORP weights");
    add_common(weights, weights_args);

    CommonArgs frontier_args;
    auto* frontier = app.add_subcommand("frontier", "Sampled efficient-frontier scatter data");
    add_common(frontier, frontier_args);

    CommonArgs backtest_args;
    std::string portfolio = "orp";
    std::string weights_file;
    auto* backtest = app.add_subcommand("backtest", "Buy-and-hold backtest over the test window");
    add_common(backtest, backtest_args);
    backtest->add_option("--portfolio", portfolio, "Portfolio to test")
        ->check(CLI::IsMember({"ewp", "mrp", "orp"}))
        ->capture_default_str();
    backtest->add_option("--weights", weights_file, "Weights CSV from the weights command (skips training)");

    CommonArgs pipeline_args;
    std::string all_dir;
    auto* pipeline = app.add_subcommand("pipeline", "Full sector run: statistics, portfolios, frontier, backtests");
    add_common(pipeline, pipeline_args, false);
    pipeline->add_option("--all", all_dir, "Run every *.cfg universe in this directory and write a summary");

    std::vector<std::string> result_files;
    std::string summary_out = ".";
    auto* summary = app.add_subcommand("summary", "Cross-sector EWP vs ORP summary from result.csv files");
    summary->add_option("results", result_files, "result.csv files from pipeline runs")->required();
    summary->add_option("--out", summary_out, "Output directory")->capture_default_str();

    std::string fetch_universe_path;
    std::string fetch_range;
    std::string fetch_out;
    FetchOptions fetch_options;
    auto* fetch = app.add_subcommand("fetch", "Download daily closes into a long-layout price CSV");
    fetch->add_option("--universe", fetch_universe_path, "Universe config file")->required();
    fetch->add_option("--range", fetch_range, "START:END (default: training start to test end)");
    fetch->add_option("--out", fetch_out, "Output CSV path")->required();
    fetch->add_option("--base-url", fetch_options.base_url, "Quote API base URL")->capture_default_str();
    fetch->add_option("--suffix", fetch_options.symbol_suffix, "Exchange suffix appended to tickers")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*stats)
        {
            std::cout << cmd_stats(to_config(stats_args)).string() << '\n';
        }
        else if (*weights)
        {
            std::cout << cmd_weights(to_config(weights_args)).string() << '\n';
        }
        else if (*frontier)
        {
            std::cout << cmd_frontier(to_config(frontier_args)).string() << '\n';
        }
        else if (*backtest)
        {
            std::optional<std::filesystem::path> wf;
            if (!weights_file.empty())
            {
                wf = weights_file;
            }
            std::cout << cmd_backtest(to_config(backtest_args), parse_portfolio_choice(portfolio), wf).string()
                      << '\n';
        }
        else if (*pipeline)
        {
            const auto config = to_config(pipeline_args);
            if (!all_dir.empty())
            {
                const auto results = cmd_pipeline_all(config, all_dir);
                for (const auto& r : results)
                {
                    print_result(r);
                }
                std::cout << summary_footer(count_winners(results)) << '\n';
            }
            else
            {
                if (pipeline_args.universe.empty())
                {
                    std::cerr << "sectorfolio: pipeline needs --universe or --all\n";
                    return 2;
                }
                print_result(cmd_pipeline(config));
            }
        }
        else if (*summary)
        {
            const auto results = read_results(result_files);
            std::cout << summary_footer(cmd_summary(results, summary_out)) << '\n';
        }
        else if (*fetch)
        {
            const auto universe = read_universe_config(std::filesystem::path(fetch_universe_path));
            const DateRange range =
                fetch_range.empty() ? DateRange{universe.train.first, universe.test.last} : parse_date_range(fetch_range);
            const auto series = fetch_universe(fetch_options, universe.tickers, range);
            std::ofstream out(fetch_out, std::ios::binary);
            if (!out)
            {
                throw Error(ErrorKind::io, "cannot write " + fetch_out);
            }
            write_long_csv(out, series);
            for (const auto& s : series)
            {
                std::cout << s.ticker << ": " << s.size() << " closes\n";
            }
        }
    }
    catch (const Error& e)
    {
        std::cerr << "sectorfolio: " << to_string(e.kind()) << " error: " << e.what() << '\n';
        return 1;
    }
    catch (const std::exception& e)
    {
        std::cerr << "sectorfolio: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
