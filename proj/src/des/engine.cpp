#include "tricklemac/des/engine.hpp"

#include <stdexcept>
#include <string>

namespace tricklemac::des
{
    EventHandle Engine::schedule(SimTime at, Action action, EventTag tag)
    {
        if (at < now_)
        {
            throw std::logic_error("Engine::schedule: event at t=" + std::to_string(ticks_of(at)) +
                                   " is before now=" + std::to_string(ticks_of(now_)));
        }
        const std::uint64_t seq = next_seq_++;
        queue_.push(Entry{at, seq});
        actions_.emplace(seq, Pending{std::move(action), tag});
        return EventHandle{seq};
    }

    EventHandle Engine::schedule_in(Duration delay, Action action, EventTag tag)
    {
        return schedule(now_ + delay, std::move(action), tag);
    }

    bool Engine::cancel(EventHandle handle)
    {
        return actions_.erase(handle.seq) > 0;
    }

    bool Engine::pop_next(Entry &out)
    {
        // Cancelled entries stay in the heap until they surface.
        while (!queue_.empty())
        {
            const Entry top = queue_.top();
            if (actions_.contains(top.seq))
            {
                out = top;
                return true;
            }
            queue_.pop();
        }
        return false;
    }

    RunResult Engine::run_until(SimTime stop, const std::function<bool()> &done)
    {
        RunResult result;
        Entry next{};
        while (true)
        {
            if (done && done())
            {
                result.stopped_by_predicate = true;
                break;
            }
            if (!pop_next(next))
            {
                result.exhausted = true;
                break;
            }
            if (next.fire_at > stop)
            {
                now_ = stop;
                break;
            }
            queue_.pop();
            auto node = actions_.extract(next.seq);
            now_ = next.fire_at;
            ++fired_;
            if (trace_)
            {
                trace_(TraceRecord{next.fire_at, next.seq, node.mapped().tag});
            }
            node.mapped().action();
        }
        result.clock = now_;
        return result;
    }

    RunResult Engine::run()
    {
        return run_until(SimTime::max());
    }
} // namespace tricklemac::des
