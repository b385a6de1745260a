#pragma once

#include "tricklemac/des/engine.hpp"
#include "tricklemac/des/random.hpp"
#include "tricklemac/des/sim_time.hpp"
#include "tricklemac/mac/csma.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace tricklemac::radio
{
    using des::Duration;
    using des::SimTime;

    enum class RadioModel
    {
        duty_cycled, ///< ContikiMAC-style: broadcasts repeated for w, received at the listener's wake-up
        ideal,       ///< instantaneous, collision-free delivery; CCA always clear
    };

    std::string_view to_string(RadioModel m);
    RadioModel parse_radio_model(std::string_view text);

    struct RdcConfig
    {
        Duration w{};               ///< wake-up interval, also the length of one broadcast
        std::vector<Duration> phase; ///< per-node offset of the first wake-up, in [0, w)
        RadioModel model = RadioModel::duty_cycled;

        void validate() const;
    };

    /// w for a wake-up frequency in Hz (8 Hz -> 125 ms).
    Duration wakeup_interval_from_hz(double hz);

    /// Earliest wake-up instant phase + j*w (j >= 0) that is >= t.
    SimTime first_wakeup_at_or_after(Duration phase, Duration w, SimTime t);

    /// The first `count` wake-up instants of a node.
    std::vector<SimTime> wakeup_cycle(Duration phase, Duration w, std::size_t count);

    /// Phases drawn uniformly on the tick grid in [0, w), one draw from each node's stream.
    std::vector<Duration> draw_phases(std::span<des::RngStream> streams, Duration w);

    struct Position
    {
        double x = 0.0;
        double y = 0.0;
    };

    /// Directed connectivity: reaches[a] lists every b with link(a, b).
    struct Links
    {
        std::vector<std::vector<std::int32_t>> reaches;
        std::vector<std::vector<std::int32_t>> heard_by;

        std::size_t size() const noexcept { return reaches.size(); }
        bool link(std::int32_t from, std::int32_t to) const;

        /// link(a, b) iff distance(a, b) <= range(a).
        static Links unit_disk(std::span<const Position> positions, std::span<const double> ranges);
        /// Undirected edge list over node indices 0..n-1.
        static Links from_edges(std::size_t n, std::span<const std::pair<std::int32_t, std::int32_t>> edges);
    };

    struct Occupancy
    {
        std::int32_t node = -1;
        std::uint64_t frame_id = 0;
        SimTime start{};
        SimTime end{};

        bool covers(SimTime t) const noexcept { return start <= t && t < end; }
    };

    struct DeliveryRecord
    {
        std::int32_t sender;
        std::int32_t listener;
        std::uint64_t frame_id;
        SimTime sent_at;
        SimTime at;
        bool delivered; ///< false: collision or listener busy transmitting
    };

    /// Shared channel: occupancy bookkeeping, CCA, and delivery at listener wake-ups.
    class RadioMedium
    {
    public:
        using Receiver = std::function<void(std::int32_t listener, const mac::Frame &frame)>;
        using Observer = std::function<void(const DeliveryRecord &)>;

        RadioMedium(des::Engine &engine, Links links, RdcConfig rdc);

        void set_receiver(Receiver r) { receiver_ = std::move(r); }
        void set_observer(Observer o) { observer_ = std::move(o); }

        /// Busy iff a node whose transmissions reach `node` occupies the channel now.
        bool cca(std::int32_t node) const;

        /// Occupy the channel for w and schedule one delivery per in-range listener
        /// at its first wake-up >= now. Returns the occupancy length.
        Duration begin_broadcast(std::int32_t node, const mac::Frame &frame);

        /// Number of occupancies audible at `listener` that cover t.
        int audible_at(std::int32_t listener, SimTime t) const;

        const Links &links() const noexcept { return links_; }
        const RdcConfig &rdc() const noexcept { return rdc_; }
        const std::vector<Occupancy> &history() const noexcept { return history_; }
        void keep_history(bool on) { keep_history_ = on; }

    private:
        void deliver(std::int32_t sender, std::int32_t listener, const mac::Frame &frame, SimTime sent_at);

        des::Engine &engine_;
        Links links_;
        RdcConfig rdc_;
        std::vector<Occupancy> current_; ///< latest occupancy per node
        std::vector<Occupancy> history_;
        bool keep_history_ = false;
        Receiver receiver_;
        Observer observer_;
    };
} // namespace tricklemac::radio
