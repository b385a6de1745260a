#pragma once

#include "tricklemac/des/sim_time.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <unordered_map>
#include <vector>

namespace tricklemac::des
{
    /// Identity of an event for tracing: which node it belongs to and what it does.
    struct EventTag
    {
        std::int32_t node = -1;
        std::int32_t kind = 0;
        std::int64_t payload = 0;

        friend bool operator==(const EventTag &, const EventTag &) = default;
    };

    struct EventHandle
    {
        std::uint64_t seq = 0;
        bool valid() const noexcept { return seq != 0; }
    };

    struct TraceRecord
    {
        SimTime fire_at;
        std::uint64_t seq;
        EventTag tag;

        friend bool operator==(const TraceRecord &, const TraceRecord &) = default;
    };

    struct RunResult
    {
        SimTime clock;
        bool exhausted = false;   // queue emptied before the stop condition held
        bool stopped_by_predicate = false;
    };

    /// Single-threaded discrete-event core. Events fire in (fire_at, seq)
    /// order; seq is the insertion counter, so simultaneous events are FIFO.
    class Engine
    {
    public:
        using Action = std::function<void()>;
        using TraceHook = std::function<void(const TraceRecord &)>;

        SimTime now() const noexcept { return now_; }

        /// Throws std::logic_error when `at` lies in the past.
        EventHandle schedule(SimTime at, Action action, EventTag tag = {});
        EventHandle schedule_in(Duration delay, Action action, EventTag tag = {});

        /// True iff the event was still pending; it will then never fire.
        bool cancel(EventHandle handle);

        bool pending(EventHandle handle) const { return actions_.contains(handle.seq); }

        /// Fire events with fire_at <= stop. Stops early once `done` returns true
        /// (checked before every event).
        RunResult run_until(SimTime stop, const std::function<bool()> &done = {});

        /// Fire every remaining event.
        RunResult run();

        std::size_t size() const noexcept { return actions_.size(); }
        std::uint64_t fired() const noexcept { return fired_; }

        void set_trace_hook(TraceHook hook) { trace_ = std::move(hook); }

    private:
        struct Entry
        {
            SimTime fire_at;
            std::uint64_t seq;
            bool operator>(const Entry &o) const noexcept
            {
                return fire_at != o.fire_at ? fire_at > o.fire_at : seq > o.seq;
            }
        };
        struct Pending
        {
            Action action;
            EventTag tag;
        };

        bool pop_next(Entry &out);

        SimTime now_ = kTimeZero;
        std::uint64_t next_seq_ = 1;
        std::uint64_t fired_ = 0;
        std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue_;
        std::unordered_map<std::uint64_t, Pending> actions_;
        TraceHook trace_;
    };
} // namespace tricklemac::des
