#pragma once

#include "tricklemac/des/engine.hpp"
#include "tricklemac/des/random.hpp"
#include "tricklemac/des/sim_time.hpp"

#include <cstdint>
#include <functional>
#include <limits>

namespace tricklemac::trickle
{
    using des::Duration;
    using des::SimTime;

    using Version = std::uint64_t;

    inline constexpr std::uint32_t kUnboundedRedundancy = std::numeric_limits<std::uint32_t>::max();

    /// Global Trickle parameters, shared by every node.
    struct TrickleParams
    {
        std::uint32_t k = 1; ///< redundancy constant; kUnboundedRedundancy never suppresses
        Duration i_min{};
        Duration i_max{};
        double eta = 0.5; ///< listen-only fraction of each interval

        /// i_max = i_min * 2^doublings.
        static TrickleParams with_doublings(std::uint32_t k, Duration i_min, unsigned doublings, double eta = 0.5);

        /// Throws std::invalid_argument if i_min <= 0, i_max is not i_min doubled
        /// a whole number of times, or eta is outside [0, 1).
        void validate() const;

        unsigned doublings() const;
    };

    struct TrickleState
    {
        Duration interval{};       ///< I
        std::uint32_t counter = 0; ///< c
        SimTime fire_at{};         ///< t
        SimTime interval_start{};
        Version version = 0;
        /// Intervals started since this node adopted `version` (1 = the adoption interval).
        std::uint32_t interval_index = 0;
    };

    enum class TimerDecision
    {
        transmit,
        suppress,
    };

    enum class Consistency
    {
        consistent,
        inconsistent_newer,
        inconsistent_older,
    };

    struct ReceiveResult
    {
        TrickleState state;
        Consistency classification;
        bool restarted = false;
    };

    /// Reset c and draw t uniformly (on the tick grid) in [now + eta*I, now + I].
    TrickleState start_interval(TrickleState state, const TrickleParams &params, des::RngStream &rng, SimTime now);

    TimerDecision on_timer(const TrickleState &state, const TrickleParams &params);

    /// Equal version counts toward c. A newer version is adopted; any inconsistency
    /// resets I to i_min and starts a new interval, but only when I > i_min.
    ReceiveResult on_receive(TrickleState state, const TrickleParams &params, Version incoming, des::RngStream &rng,
                             SimTime now);

    /// I := min(2I, i_max), then a new interval.
    TrickleState on_interval_end(TrickleState state, const TrickleParams &params, des::RngStream &rng, SimTime now);

    /// Binds the state machine to the engine: owns the timer and interval-end events
    /// and reports transmit requests through a callback.
    class TrickleTimer
    {
    public:
        struct Callbacks
        {
            /// Timer fired with c < k; the caller queues a broadcast.
            std::function<void(Version version, std::uint32_t interval_index)> transmit;
            std::function<void()> suppressed;
            /// Called after every state change (interval start, reception, adoption).
            std::function<void(const TrickleState &)> changed;
        };

        TrickleTimer(des::Engine &engine, des::RngStream &rng, const TrickleParams &params, std::int32_t node_id,
                     Callbacks callbacks);
        ~TrickleTimer();

        TrickleTimer(const TrickleTimer &) = delete;
        TrickleTimer &operator=(const TrickleTimer &) = delete;

        /// Start running with interval size `interval` from now.
        void start(Version version, Duration interval);

        /// External update (injection): adopt `version`, set I = i_min and restart unconditionally.
        void inject(Version version);

        ReceiveResult receive(Version incoming);

        const TrickleState &state() const noexcept { return state_; }
        bool running() const noexcept { return running_; }

    private:
        void begin_interval();
        void handle_timer();
        void handle_interval_end();
        void cancel_events();
        void notify();

        des::Engine &engine_;
        des::RngStream &rng_;
        TrickleParams params_;
        std::int32_t node_id_;
        Callbacks callbacks_;
        TrickleState state_;
        bool running_ = false;
        des::EventHandle timer_event_;
        des::EventHandle end_event_;
    };
} // namespace tricklemac::trickle
