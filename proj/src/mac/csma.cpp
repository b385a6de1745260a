#include "tricklemac/mac/csma.hpp"

#include "tricklemac/scenario/event_kinds.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tricklemac::mac
{
    std::string_view to_string(MacVariant v)
    {
        switch (v)
        {
        case MacVariant::standard:
            return "standard";
        case MacVariant::contiki_broadcast:
            return "contiki-broadcast";
        case MacVariant::contiki_broadcast_cleansing:
            return "contiki-broadcast+cleansing";
        }
        return "?";
    }

    MacVariant parse_variant(std::string_view text)
    {
        if (text == "standard")
        {
            return MacVariant::standard;
        }
        if (text == "contiki-broadcast" || text == "contiki")
        {
            return MacVariant::contiki_broadcast;
        }
        if (text == "contiki-broadcast+cleansing" || text == "cleansing")
        {
            return MacVariant::contiki_broadcast_cleansing;
        }
        throw std::invalid_argument("unknown MAC variant '" + std::string(text) + "'");
    }

    unsigned MacParams::be_cap() const noexcept
    {
        return contiki() ? std::min(be_max, 1U) : be_max;
    }

    void MacParams::validate() const
    {
        if (be_min > be_max)
        {
            throw std::invalid_argument("MAC: be_min > be_max");
        }
        if (be_max > 20)
        {
            throw std::invalid_argument("MAC: be_max too large");
        }
        if (bp <= Duration::zero())
        {
            throw std::invalid_argument("MAC: back-off period must be positive");
        }
        if (queue_capacity == 0)
        {
            throw std::invalid_argument("MAC: queue capacity must be positive");
        }
    }

    bool MacQueue::push(Frame frame, std::int32_t destination)
    {
        if (size_ >= capacity_)
        {
            return false;
        }
        queues_[destination].push_back(std::move(frame));
        ++size_;
        return true;
    }

    Frame *MacQueue::head()
    {
        for (auto &[dest, q] : queues_)
        {
            if (!q.empty())
            {
                return &q.front();
            }
        }
        return nullptr;
    }

    Frame MacQueue::pop_head()
    {
        for (auto &[dest, q] : queues_)
        {
            if (!q.empty())
            {
                Frame f = std::move(q.front());
                q.pop_front();
                --size_;
                return f;
            }
        }
        throw std::logic_error("MacQueue::pop_head on empty queue");
    }

    std::deque<Frame> MacQueue::purge(FrameKind kind)
    {
        std::deque<Frame> removed;
        for (auto &[dest, q] : queues_)
        {
            auto keep = std::stable_partition(q.begin(), q.end(), [kind](const Frame &f) { return f.kind != kind; });
            std::move(keep, q.end(), std::back_inserter(removed));
            q.erase(keep, q.end());
        }
        size_ -= removed.size();
        return removed;
    }

    std::size_t MacQueue::count(FrameKind kind) const
    {
        std::size_t n = 0;
        for (const auto &[dest, q] : queues_)
        {
            n += static_cast<std::size_t>(
                std::count_if(q.begin(), q.end(), [kind](const Frame &f) { return f.kind == kind; }));
        }
        return n;
    }

    Duration backoff_delay(const MacParams &params, const Frame &frame, des::RngStream &rng)
    {
        if (params.contiki() && frame.kind == FrameKind::trickle_broadcast && frame.nb > 0)
        {
            return params.bp;
        }
        const std::int64_t slots = des::uniform_int(rng, 0, (std::int64_t{1} << frame.be) - 1);
        return params.bp * slots;
    }

    AttemptResult attempt(Frame &head, const MacParams &params, bool channel_busy, des::RngStream &rng)
    {
        if (!channel_busy)
        {
            return {AttemptOutcome::start_transmission, Duration::zero()};
        }
        ++head.nb;
        head.be = std::min(head.be + 1, params.be_cap());
        if (head.nb > params.nb_max)
        {
            return {AttemptOutcome::drop, Duration::zero()};
        }
        return {AttemptOutcome::backoff, backoff_delay(params, head, rng)};
    }

    CsmaMac::CsmaMac(des::Engine &engine, des::RngStream &rng, const MacParams &params, std::int32_t node_id,
                     Hooks hooks)
        : engine_(engine), rng_(rng), params_(params), node_id_(node_id), hooks_(std::move(hooks)),
          queue_(params.queue_capacity)
    {
        params_.validate();
    }

    CsmaMac::~CsmaMac()
    {
        engine_.cancel(attempt_event_);
        engine_.cancel(end_event_);
    }

    bool CsmaMac::enqueue(Frame frame)
    {
        frame.nb = 0;
        frame.be = params_.be_min;
        frame.enqueued_at = engine_.now();
        if (!queue_.push(frame))
        {
            emit(MacEventKind::overflow_drop, frame);
            return false;
        }
        emit(MacEventKind::enqueued, frame);
        kick();
        return true;
    }

    void CsmaMac::kick()
    {
        if (transmitting_ || attempt_event_.valid())
        {
            return;
        }
        Frame *head = queue_.head();
        if (head == nullptr)
        {
            return;
        }
        const Duration delay = backoff_delay(params_, *head, rng_);
        if (delay == Duration::zero())
        {
            do_attempt();
        }
        else
        {
            schedule_attempt(delay);
        }
    }

    void CsmaMac::schedule_attempt(Duration delay)
    {
        attempt_event_ = engine_.schedule_in(
            delay,
            [this] {
                attempt_event_ = {};
                do_attempt();
            },
            {node_id_, scenario::kMacAttempt, 0});
    }

    void CsmaMac::do_attempt()
    {
        Frame *head = queue_.head();
        if (head == nullptr)
        {
            return;
        }
        emit(MacEventKind::attempt, *head);
        const bool busy = hooks_.channel_busy ? hooks_.channel_busy() : false;
        const AttemptResult r = attempt(*head, params_, busy, rng_);
        switch (r.outcome)
        {
        case AttemptOutcome::start_transmission: {
            Frame frame = queue_.pop_head();
            transmitting_ = true;
            emit(MacEventKind::transmit_start, frame);
            const Duration airtime = hooks_.transmit ? hooks_.transmit(frame) : Duration::zero();
            end_event_ = engine_.schedule_in(
                airtime,
                [this] {
                    end_event_ = {};
                    finish_transmission();
                },
                {node_id_, scenario::kRadioEnd, static_cast<std::int64_t>(frame.id)});
            break;
        }
        case AttemptOutcome::backoff:
            emit(MacEventKind::backoff, *head);
            schedule_attempt(r.delay);
            break;
        case AttemptOutcome::drop: {
            Frame frame = queue_.pop_head();
            emit(MacEventKind::csma_drop, frame);
            kick();
            break;
        }
        }
    }

    void CsmaMac::finish_transmission()
    {
        transmitting_ = false;
        kick();
    }

    void CsmaMac::on_incoming(const Frame &frame)
    {
        if (params_.cleansing() && frame.kind == FrameKind::trickle_broadcast)
        {
            const auto purged = queue_.purge(FrameKind::trickle_broadcast);
            if (!purged.empty() && attempt_event_.valid() && queue_.head() == nullptr)
            {
                engine_.cancel(attempt_event_);
                attempt_event_ = {};
            }
            for (const Frame &f : purged)
            {
                emit(MacEventKind::cleansing_purge, f);
            }
        }
        emit(MacEventKind::delivered_up, frame);
        if (hooks_.deliver_up)
        {
            hooks_.deliver_up(frame);
        }
    }

    void CsmaMac::emit(MacEventKind kind, const Frame &frame)
    {
        if (hooks_.observe)
        {
            hooks_.observe(MacEvent{kind, frame, engine_.now()});
        }
    }
} // namespace tricklemac::mac
