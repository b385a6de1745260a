#pragma once

#include "tricklemac/cli/config.hpp"
#include "tricklemac/scenario/metrics.hpp"

#include <cstdint>
#include <ostream>
#include <string_view>
#include <vector>

namespace tricklemac::cli
{
    /// Thrown for malformed command arguments (exit code kExitUsage).
    class UsageError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    inline constexpr int kExitOk = 0;
    inline constexpr int kExitFailure = 1; ///< I/O or unexpected runtime error
    inline constexpr int kExitUsage = 2;   ///< bad arguments or configuration
    inline constexpr int kExitTimeout = 3; ///< at least one replication hit the time limit

    struct IntRange
    {
        int lo = 0;
        int hi = 0;
    };

    struct RealRange
    {
        double lo = 0.0;
        double hi = 0.0;
        double step = 1.0;

        std::vector<double> values() const;
    };

    /// "A:B" or "A".
    IntRange parse_int_range(std::string_view text);
    /// "C:D", "C:D:step" or "C".
    RealRange parse_real_range(std::string_view text);

    /// One row per (n, m): n, m, p_bo_n, expected_redundant, p_n_b_0..p_n_b_{max n - 1}.
    void cmd_analyze(IntRange n, const RealRange &m, std::ostream &out);

    /// One row: empirical distribution of b with standard errors, plus the closed forms.
    void cmd_mc(int n, double m, std::uint64_t reps, std::uint64_t seed, std::ostream &out);

    struct RunReport
    {
        std::vector<scenario::Metrics> metrics;
        scenario::Summary summary;
        std::size_t timed_out = 0;
    };

    /// Run config.reps replications (seeded from config.seed) and write one CSV row
    /// per replication followed by summary rows. Rows are in replication order
    /// whatever the number of worker threads.
    RunReport cmd_run(const ScenarioConfig &config, std::ostream &out, unsigned threads = 1);

    std::vector<scenario::Metrics> run_replications(const scenario::Scenario &scenario, std::uint64_t reps,
                                                    std::uint64_t base_seed, unsigned threads = 1);

    void write_run_csv(std::span<const scenario::Metrics> metrics,
                       const scenario::Summary &summary, std::ostream &out);
} // namespace tricklemac::cli
