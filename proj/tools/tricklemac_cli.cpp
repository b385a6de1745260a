// Command-line front end: closed-form analysis, Monte Carlo oracle, and
// discrete-event replications written as CSV.

#include "tricklemac/cli/commands.hpp"
#include "tricklemac/cli/config.hpp"

#include <CLI11.hpp>

#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

namespace
{
    using namespace tricklemac;

    // Opens --out; "-" means stdout.
    class Output
    {
    public:
        explicit Output(const std::string &path)
        {
            if (path != "-")
            {
                file_.open(path, std::ios::out | std::ios::trunc);
                if (!file_)
                {
                    throw std::runtime_error("cannot write output file '" + path + "'");
                }
            }
        }

        std::ostream &stream() { return file_.is_open() ? static_cast<std::ostream &>(file_) : std::cout; }

        void close()
        {
            stream().flush();
            if (!stream())
            {
                throw std::runtime_error("error writing output");
            }
        }

    private:
        std::ofstream file_;
    };
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Trickle over CSMA/CA + duty-cycled radio: analysis and simulation"};
    app.require_subcommand(1);

    std::string out_path = "-";

    auto *analyze = app.add_subcommand("analyze", "closed-form back-off probabilities over an (n, m) grid");
    std::string n_range = "2:5";
    std::string m_range = "2:14:2";
    analyze->add_option("--n", n_range, "node counts A:B")->capture_default_str();
    analyze->add_option("--m", m_range, "I_min/w values C:D[:step]")->capture_default_str();
    analyze->add_option("--out", out_path, "CSV output file ('-' for stdout)")->capture_default_str();

    auto *mc = app.add_subcommand("mc", "Monte Carlo estimate of the single-hop back-off distribution");
    int mc_n = 2;
    double mc_m = 10.0;
    std::uint64_t mc_reps = 1000000;
    std::uint64_t mc_seed = 1;
    mc->add_option("--n", mc_n, "number of synchronized nodes")->capture_default_str();
    mc->add_option("--m", mc_m, "I_min / w")->capture_default_str();
    mc->add_option("--reps", mc_reps, "replications")->capture_default_str();
    mc->add_option("--seed", mc_seed, "random seed")->capture_default_str();
    mc->add_option("--out", out_path, "CSV output file ('-' for stdout)")->capture_default_str();

    auto *run = app.add_subcommand("run", "discrete-event replications of a scenario");
    std::string config_path;
    std::optional<std::uint64_t> run_reps;
    std::optional<std::uint64_t> run_seed;
    unsigned threads = std::max(1U, std::thread::hardware_concurrency());
    run->add_option("--config", config_path, "scenario configuration file")->required();
    run->add_option("--reps", run_reps, "replications (overrides the config)");
    run->add_option("--seed", run_seed, "base seed (overrides the config)");
    run->add_option("--threads", threads, "worker threads")->capture_default_str();
    run->add_option("--out", out_path, "CSV output file ('-' for stdout)")->capture_default_str();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? cli::kExitOk : cli::kExitUsage;
    }

    try
    {
        if (*analyze)
        {
            const auto n = cli::parse_int_range(n_range);
            const auto m = cli::parse_real_range(m_range);
            Output out(out_path);
            cli::cmd_analyze(n, m, out.stream());
            out.close();
        }
        else if (*mc)
        {
            Output out(out_path);
            cli::cmd_mc(mc_n, mc_m, mc_reps, mc_seed, out.stream());
            out.close();
        }
        else if (*run)
        {
            auto config = cli::load_config(config_path);
            if (run_reps)
            {
                if (*run_reps < 1)
                {
                    throw cli::UsageError("--reps must be >= 1");
                }
                config.reps = *run_reps;
            }
            if (run_seed)
            {
                config.seed = *run_seed;
            }
            Output out(out_path);
            const auto report = cli::cmd_run(config, out.stream(), threads);
            out.close();
            if (report.timed_out > 0)
            {
                fmt::print(stderr, "{} of {} replications hit the time limit\n", report.timed_out,
                           report.metrics.size());
                return cli::kExitTimeout;
            }
        }
    }
    catch (const cli::UsageError &e)
    {
        fmt::print(stderr, "usage error: {}\n", e.what());
        return cli::kExitUsage;
    }
    catch (const cli::ConfigError &e)
    {
        fmt::print(stderr, "{}\n", e.what());
        return cli::kExitUsage;
    }
    catch (const std::invalid_argument &e)
    {
        fmt::print(stderr, "invalid argument: {}\n", e.what());
        return cli::kExitUsage;
    }
    catch (const std::exception &e)
    {
        fmt::print(stderr, "error: {}\n", e.what());
        return cli::kExitFailure;
    }
    return cli::kExitOk;
}
