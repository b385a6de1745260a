#pragma once

#include "tricklemac/des/engine.hpp"
#include "tricklemac/des/random.hpp"
#include "tricklemac/des/sim_time.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <string_view>

namespace tricklemac::mac
{
    using des::Duration;
    using des::SimTime;

    enum class MacVariant
    {
        standard,                    ///< 802.15.4 unslotted CSMA/CA, random back-off
        contiki_broadcast,           ///< Contiki: broadcast back-off fixed at one BP, BE capped at 1
        contiki_broadcast_cleansing, ///< Contiki plus purging of queued Trickle frames on reception
    };

    std::string_view to_string(MacVariant v);
    /// Accepts "standard", "contiki-broadcast", "contiki-broadcast+cleansing" (and "contiki", "cleansing").
    MacVariant parse_variant(std::string_view text);

    struct MacParams
    {
        unsigned be_min = 0;
        unsigned be_max = 3;
        unsigned nb_max = 3;
        Duration bp{};
        MacVariant variant = MacVariant::contiki_broadcast;
        std::size_t queue_capacity = 8;

        bool cleansing() const noexcept { return variant == MacVariant::contiki_broadcast_cleansing; }
        bool contiki() const noexcept { return variant != MacVariant::standard; }
        /// Largest BE a frame can reach under this variant.
        unsigned be_cap() const noexcept;
        void validate() const;
    };

    enum class FrameKind
    {
        trickle_broadcast,
    };

    struct Frame
    {
        std::uint64_t id = 0;
        std::int32_t origin = -1;
        FrameKind kind = FrameKind::trickle_broadcast;
        std::uint64_t version = 0;
        std::uint32_t origin_interval = 0; ///< sender's Trickle interval index when the frame was generated
        SimTime enqueued_at{};
        unsigned nb = 0;
        unsigned be = 0;
    };

    inline constexpr std::int32_t kBroadcast = -1;

    /// Outgoing frames, FIFO per destination. The frame on air is not in here.
    class MacQueue
    {
    public:
        explicit MacQueue(std::size_t capacity = 8) : capacity_(capacity) {}

        /// False when the queue is full (the frame is not stored).
        bool push(Frame frame, std::int32_t destination = kBroadcast);

        bool empty() const noexcept { return size_ == 0; }
        std::size_t size() const noexcept { return size_; }
        std::size_t capacity() const noexcept { return capacity_; }

        /// Head of the oldest non-empty destination queue, broadcast first.
        Frame *head();
        Frame pop_head();

        /// Remove every queued frame of `kind`; returns the removed frames in order.
        std::deque<Frame> purge(FrameKind kind);

        std::size_t count(FrameKind kind) const;

    private:
        std::size_t capacity_;
        std::size_t size_ = 0;
        std::map<std::int32_t, std::deque<Frame>> queues_;
    };

    /// Back-off before the next CCA of `frame`. Standard: BP * U{0..2^BE - 1}.
    /// Contiki variants: the first attempt uses BE (0 by default, so no wait);
    /// every retry after a busy CCA waits exactly BP.
    Duration backoff_delay(const MacParams &params, const Frame &frame, des::RngStream &rng);

    enum class AttemptOutcome
    {
        start_transmission,
        backoff,
        drop,
    };

    struct AttemptResult
    {
        AttemptOutcome outcome;
        Duration delay{}; ///< only for backoff
    };

    /// One CCA on the head frame. A busy channel bumps NB and BE; the frame is
    /// dropped after nb_max + 1 busy assessments.
    AttemptResult attempt(Frame &head, const MacParams &params, bool channel_busy, des::RngStream &rng);

    enum class MacEventKind
    {
        enqueued,
        overflow_drop,
        attempt,
        backoff,
        transmit_start,
        csma_drop,
        cleansing_purge,
        delivered_up,
    };

    struct MacEvent
    {
        MacEventKind kind;
        const Frame &frame;
        SimTime at;
    };

    /// Per-node CSMA/CA state machine driven by the engine.
    class CsmaMac
    {
    public:
        struct Hooks
        {
            /// Clear-channel assessment at this node, now.
            std::function<bool()> channel_busy;
            /// Put the frame on air; returns how long the channel is occupied.
            std::function<Duration(const Frame &)> transmit;
            /// Incoming frame handed to the upper layer.
            std::function<void(const Frame &)> deliver_up;
            std::function<void(const MacEvent &)> observe;
        };

        CsmaMac(des::Engine &engine, des::RngStream &rng, const MacParams &params, std::int32_t node_id, Hooks hooks);
        ~CsmaMac();

        CsmaMac(const CsmaMac &) = delete;
        CsmaMac &operator=(const CsmaMac &) = delete;

        /// False when the frame was dropped for lack of queue space.
        bool enqueue(Frame frame);

        /// Frame received from the radio. Cleansing purges queued Trickle frames first.
        void on_incoming(const Frame &frame);

        const MacQueue &queue() const noexcept { return queue_; }
        bool transmitting() const noexcept { return transmitting_; }
        bool backing_off() const noexcept { return attempt_event_.valid(); }
        const MacParams &params() const noexcept { return params_; }

    private:
        void schedule_attempt(Duration delay);
        void do_attempt();
        void finish_transmission();
        void kick();
        void emit(MacEventKind kind, const Frame &frame);

        des::Engine &engine_;
        des::RngStream &rng_;
        MacParams params_;
        std::int32_t node_id_;
        Hooks hooks_;
        MacQueue queue_;
        bool transmitting_ = false;
        des::EventHandle attempt_event_;
        des::EventHandle end_event_;
    };
} // namespace tricklemac::mac
