#include "tricklemac/cli/commands.hpp"

#include "tricklemac/analysis/closed_form.hpp"
#include "tricklemac/analysis/monte_carlo.hpp"
#include "tricklemac/des/random.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <thread>

namespace tricklemac::cli
{
    namespace
    {
        std::vector<std::string_view> split_colon(std::string_view text)
        {
            std::vector<std::string_view> parts;
            while (true)
            {
                const auto pos = text.find(':');
                parts.push_back(text.substr(0, pos));
                if (pos == std::string_view::npos)
                {
                    break;
                }
                text.remove_prefix(pos + 1);
            }
            return parts;
        }

        template <typename T>
        T parse_number(std::string_view text, std::string_view what)
        {
            T out{};
            const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
            if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
            {
                throw UsageError(fmt::format("{}: '{}' is not a number", what, text));
            }
            return out;
        }

        void write_row(std::ostream &out, const std::vector<std::string> &cells)
        {
            out << fmt::format("{}\n", fmt::join(cells, ","));
        }

        std::string num(double v)
        {
            return fmt::format("{:.9f}", v);
        }
    } // namespace

    std::vector<double> RealRange::values() const
    {
        std::vector<double> out;
        for (int i = 0;; ++i)
        {
            const double v = lo + i * step;
            if (v > hi + 1e-9 * std::max(1.0, std::abs(hi)))
            {
                break;
            }
            out.push_back(v);
        }
        return out;
    }

    IntRange parse_int_range(std::string_view text)
    {
        const auto parts = split_colon(text);
        if (parts.size() > 2)
        {
            throw UsageError(fmt::format("range '{}': expected A:B", text));
        }
        IntRange r;
        r.lo = parse_number<int>(parts[0], "range start");
        r.hi = parts.size() == 2 ? parse_number<int>(parts[1], "range end") : r.lo;
        if (r.lo > r.hi)
        {
            throw UsageError(fmt::format("range '{}': start exceeds end", text));
        }
        return r;
    }

    RealRange parse_real_range(std::string_view text)
    {
        const auto parts = split_colon(text);
        if (parts.size() > 3)
        {
            throw UsageError(fmt::format("range '{}': expected C:D[:step]", text));
        }
        RealRange r;
        r.lo = parse_number<double>(parts[0], "range start");
        r.hi = parts.size() >= 2 ? parse_number<double>(parts[1], "range end") : r.lo;
        r.step = parts.size() == 3 ? parse_number<double>(parts[2], "range step") : 1.0;
        if (!(r.step > 0.0) || !std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi)
        {
            throw UsageError(fmt::format("range '{}': need start <= end and a positive step", text));
        }
        return r;
    }

    void cmd_analyze(IntRange n, const RealRange &m, std::ostream &out)
    {
        if (n.lo < 2 || n.hi > 64 || n.lo > n.hi)
        {
            throw UsageError("analyze: --n must lie within 2:64");
        }
        const auto ms = m.values();
        if (ms.empty() || ms.front() < 2.0)
        {
            throw UsageError("analyze: --m must start at 2 or above");
        }

        std::vector<std::string> header{"n", "m", "p_bo_n", "expected_redundant"};
        for (int b = 0; b < n.hi; ++b)
        {
            header.push_back(fmt::format("p_n_b_{}", b));
        }
        write_row(out, header);

        for (int nn = n.lo; nn <= n.hi; ++nn)
        {
            for (double mm : ms)
            {
                const auto r = analysis::analyze({nn, mm});
                std::vector<std::string> row{std::to_string(nn), fmt::format("{:g}", mm), num(r.p_bo_n),
                                             num(r.expected_redundant)};
                for (int b = 0; b < n.hi; ++b)
                {
                    row.push_back(b < nn ? num(r.p_n_b[static_cast<std::size_t>(b)]) : std::string{});
                }
                write_row(out, row);
            }
        }
    }

    void cmd_mc(int n, double m, std::uint64_t reps, std::uint64_t seed, std::ostream &out)
    {
        if (n < 2 || n > 64)
        {
            throw UsageError("mc: --n must lie in [2, 64]");
        }
        if (!(m >= 2.0))
        {
            throw UsageError("mc: --m must be >= 2");
        }
        if (reps < 1)
        {
            throw UsageError("mc: --reps must be >= 1");
        }
        des::RngStream rng(seed, 0, 0);
        const auto r = analysis::mc_single_hop(n, m, reps, rng);

        std::vector<std::string> header{"n", "m", "reps", "seed"};
        for (int b = 0; b < n; ++b)
        {
            header.push_back(fmt::format("freq_b_{}", b));
        }
        for (int b = 0; b < n; ++b)
        {
            header.push_back(fmt::format("se_b_{}", b));
        }
        for (const char *h : {"p_backoff", "se_p_backoff", "mean_b", "se_mean_b", "p_bo_n", "expected_redundant"})
        {
            header.emplace_back(h);
        }
        write_row(out, header);

        std::vector<std::string> row{std::to_string(n), fmt::format("{:g}", m), std::to_string(reps),
                                     std::to_string(seed)};
        for (double f : r.freq)
        {
            row.push_back(num(f));
        }
        for (double se : r.freq_se)
        {
            row.push_back(num(se));
        }
        row.push_back(num(r.p_backoff));
        row.push_back(num(r.p_backoff_se));
        row.push_back(num(r.mean_b));
        row.push_back(num(r.mean_b_se));
        row.push_back(num(analysis::p_bo_n(n, m)));
        row.push_back(num(analysis::expected_redundant(n, m)));
        write_row(out, row);
    }

    std::vector<scenario::Metrics> run_replications(const scenario::Scenario &scenario, std::uint64_t reps,
                                                    std::uint64_t base_seed, unsigned threads)
    {
        std::vector<scenario::Metrics> results(reps);
        threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(reps, 256))));
        std::atomic<std::uint64_t> next{0};
        auto worker = [&] {
            for (std::uint64_t rep = next++; rep < reps; rep = next++)
            {
                results[rep] = scenario::run_replication(scenario, scenario::replication_seed(base_seed, rep));
            }
        };
        if (threads == 1)
        {
            worker();
        }
        else
        {
            std::vector<std::jthread> pool;
            for (unsigned i = 0; i < threads; ++i)
            {
                pool.emplace_back(worker);
            }
        }
        return results;
    }

    void write_run_csv(std::span<const scenario::Metrics> metrics,
                       const scenario::Summary &summary, std::ostream &out)
    {
        write_row(out, {"rep", "seed", "delay_ms", "updated_interval_per_sink", "tx", "rtx", "csma_drops",
                        "cleansing_drops", "mean_queue_ms", "suppressions", "timed_out"});
        for (std::size_t rep = 0; rep < metrics.size(); ++rep)
        {
            const auto &m = metrics[rep];
            std::vector<std::string> sinks;
            for (std::size_t v = 0; v < m.node_ids.size(); ++v)
            {
                if (!m.injected[v])
                {
                    sinks.push_back(fmt::format("{}:{}", m.node_ids[v], m.updated_in_interval[v]));
                }
            }
            write_row(out, {std::to_string(rep), std::to_string(m.seed), fmt::format("{:.3f}", m.delay_ms()),
                            fmt::format("{}", fmt::join(sinks, ";")), std::to_string(m.tx_count),
                            std::to_string(m.rtx_count), std::to_string(m.csma_drops),
                            std::to_string(m.cleansing_drops), fmt::format("{:.3f}", m.mean_queue_ms()),
                            std::to_string(m.suppressions), m.timed_out ? "1" : "0"});
        }

        auto stat_row = [&](std::string_view label, auto field) {
            write_row(out, {std::string(label), "", fmt::format("{:.3f}", field(summary.delay_ms)), "",
                            fmt::format("{:.3f}", field(summary.tx)), fmt::format("{:.3f}", field(summary.rtx)),
                            fmt::format("{:.3f}", field(summary.csma_drops)),
                            fmt::format("{:.3f}", field(summary.cleansing_drops)),
                            fmt::format("{:.3f}", field(summary.queue_ms)),
                            fmt::format("{:.3f}", field(summary.suppressions)), std::to_string(summary.timed_out)});
        };
        stat_row("mean", [](const scenario::FieldSummary &f) { return f.mean; });
        stat_row("stddev", [](const scenario::FieldSummary &f) { return f.stddev; });
        stat_row("p50", [](const scenario::FieldSummary &f) { return f.p50; });
        stat_row("p90", [](const scenario::FieldSummary &f) { return f.p90; });
        write_row(out, {"worst_decile", "", fmt::format("{:.3f}", summary.worst_decile_delay_ms), "", "", "", "", "",
                        "", "", std::to_string(summary.timed_out)});
    }

    RunReport cmd_run(const ScenarioConfig &config, std::ostream &out, unsigned threads)
    {
        const scenario::Scenario scenario = config.to_scenario();
        RunReport report;
        report.metrics = run_replications(scenario, config.reps, config.seed, threads);
        report.summary = scenario::aggregate(report.metrics);
        report.timed_out = report.summary.timed_out;
        write_run_csv(report.metrics, report.summary, out);
        return report;
    }
} // namespace tricklemac::cli
