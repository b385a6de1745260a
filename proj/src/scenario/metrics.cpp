#include "tricklemac/scenario/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tricklemac::scenario
{
    std::int32_t Metrics::updated_interval_of(std::int32_t id) const
    {
        for (std::size_t i = 0; i < node_ids.size(); ++i)
        {
            if (node_ids[i] == id)
            {
                return updated_in_interval[i];
            }
        }
        throw std::out_of_range("no node " + std::to_string(id) + " in metrics");
    }

    double percentile(std::vector<double> values, double q)
    {
        if (values.empty())
        {
            throw std::invalid_argument("percentile of an empty list");
        }
        std::sort(values.begin(), values.end());
        const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
    }

    double worst_decile_mean(std::vector<double> values)
    {
        if (values.empty())
        {
            throw std::invalid_argument("worst-decile mean of an empty list");
        }
        const std::size_t take = (values.size() + 9) / 10;
        std::sort(values.begin(), values.end(), std::greater<>());
        return std::accumulate(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(take), 0.0) /
               static_cast<double>(take);
    }

    FieldSummary summarize(std::span<const double> values)
    {
        if (values.empty())
        {
            throw std::invalid_argument("summary of an empty list");
        }
        FieldSummary s;
        const auto n = static_cast<double>(values.size());
        s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
        double ss = 0.0;
        for (double v : values)
        {
            ss += (v - s.mean) * (v - s.mean);
        }
        s.stddev = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        std::vector<double> v(values.begin(), values.end());
        s.min = *std::min_element(v.begin(), v.end());
        s.max = *std::max_element(v.begin(), v.end());
        s.p50 = percentile(v, 0.5);
        s.p90 = percentile(std::move(v), 0.9);
        return s;
    }

    Summary aggregate(std::span<const Metrics> metrics)
    {
        if (metrics.empty())
        {
            throw std::invalid_argument("aggregate of an empty metrics list");
        }
        auto column = [&](auto &&get) {
            std::vector<double> out;
            out.reserve(metrics.size());
            for (const Metrics &m : metrics)
            {
                out.push_back(static_cast<double>(get(m)));
            }
            return out;
        };

        Summary s;
        s.count = metrics.size();
        s.timed_out = static_cast<std::size_t>(
            std::count_if(metrics.begin(), metrics.end(), [](const Metrics &m) { return m.timed_out; }));
        const auto delays = column([](const Metrics &m) { return m.delay_ms(); });
        s.delay_ms = summarize(delays);
        s.worst_decile_delay_ms = worst_decile_mean(delays);
        s.tx = summarize(column([](const Metrics &m) { return m.tx_count; }));
        s.rtx = summarize(column([](const Metrics &m) { return m.rtx_count; }));
        s.csma_drops = summarize(column([](const Metrics &m) { return m.csma_drops; }));
        s.cleansing_drops = summarize(column([](const Metrics &m) { return m.cleansing_drops; }));
        s.queue_ms = summarize(column([](const Metrics &m) { return m.mean_queue_ms(); }));
        s.suppressions = summarize(column([](const Metrics &m) { return m.suppressions; }));
        return s;
    }
} // namespace tricklemac::scenario
