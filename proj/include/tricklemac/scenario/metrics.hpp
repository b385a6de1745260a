#pragma once

#include "tricklemac/des/sim_time.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace tricklemac::scenario
{
    using des::Duration;

    /// Whole-run frame accounting: every enqueued frame ends up in exactly one bucket.
    struct FrameLedger
    {
        std::uint64_t enqueued = 0;
        std::uint64_t transmitted = 0;
        std::uint64_t csma_dropped = 0;
        std::uint64_t purged = 0;
        std::uint64_t in_queue_at_end = 0;
        std::uint64_t overflow = 0; ///< refused at enqueue; never counted as enqueued

        bool reconciles() const noexcept
        {
            return enqueued == transmitted + csma_dropped + purged + in_queue_at_end;
        }
    };

    inline constexpr std::int32_t kNeverUpdated = -1;

    /// Measurements of one replication. Counters cover the period from the
    /// injection to the end of the run.
    struct Metrics
    {
        std::uint64_t seed = 0;
        Duration update_delay{}; ///< injection -> last node holds the new version
        bool timed_out = false;

        std::vector<std::int32_t> node_ids;
        std::vector<bool> injected;
        /// Updater's interval index (1 = its adoption interval) for the frame that
        /// updated the node; 0 for injected nodes; kNeverUpdated if never updated.
        std::vector<std::int32_t> updated_in_interval;
        std::vector<Duration> adoption_delay; ///< per node, relative to the injection; negative if never

        std::uint64_t tx_count = 0;    ///< transmissions put on air
        std::uint64_t attempts = 0;    ///< clear-channel assessments
        std::uint64_t rtx_count = 0;   ///< assessments beyond a frame's first
        std::uint64_t csma_drops = 0;
        std::uint64_t cleansing_drops = 0;
        std::uint64_t overflow_drops = 0;
        std::uint64_t suppressions = 0;
        std::uint64_t deliveries = 0;
        std::uint64_t collisions = 0;
        std::uint64_t backoffs = 0; ///< busy assessments followed by a back-off

        Duration queue_time_total{}; ///< over frames that left the queue (sent, dropped or purged)
        std::uint64_t queue_samples = 0;

        FrameLedger ledger;

        double mean_queue_ms() const noexcept
        {
            return queue_samples == 0 ? 0.0 : des::to_ms(queue_time_total) / static_cast<double>(queue_samples);
        }
        double delay_ms() const noexcept { return des::to_ms(update_delay); }
        /// updated_in_interval of node `id`; throws std::out_of_range if absent.
        std::int32_t updated_interval_of(std::int32_t id) const;
    };

    struct FieldSummary
    {
        double mean = 0.0;
        double stddev = 0.0; ///< sample standard deviation (n - 1)
        double min = 0.0;
        double p50 = 0.0;
        double p90 = 0.0;
        double max = 0.0;
    };

    struct Summary
    {
        std::size_t count = 0;
        std::size_t timed_out = 0;
        FieldSummary delay_ms;
        FieldSummary tx;
        FieldSummary rtx;
        FieldSummary csma_drops;
        FieldSummary cleansing_drops;
        FieldSummary queue_ms;
        FieldSummary suppressions;
        double worst_decile_delay_ms = 0.0;
    };

    /// Linear-interpolation percentile, q in [0, 1]. Empty input throws.
    double percentile(std::vector<double> values, double q);

    /// Mean of the largest ceil(10%) values. Empty input throws.
    double worst_decile_mean(std::vector<double> values);

    FieldSummary summarize(std::span<const double> values);

    /// Throws std::invalid_argument on an empty list.
    Summary aggregate(std::span<const Metrics> metrics);
} // namespace tricklemac::scenario
