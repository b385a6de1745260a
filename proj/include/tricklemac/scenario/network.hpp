#pragma once

#include "tricklemac/des/engine.hpp"
#include "tricklemac/des/random.hpp"
#include "tricklemac/mac/csma.hpp"
#include "tricklemac/radio/medium.hpp"
#include "tricklemac/scenario/metrics.hpp"
#include "tricklemac/scenario/topology.hpp"
#include "tricklemac/trickle/trickle.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace tricklemac::scenario
{
    using des::Duration;
    using des::SimTime;

    inline constexpr trickle::Version kOldVersion = 0;
    inline constexpr trickle::Version kNewVersion = 1;

    /// Everything needed to build and run one replication.
    struct Scenario
    {
        Topology topology;
        trickle::TrickleParams trickle;
        mac::MacParams mac;
        Duration w{}; ///< radio wake-up interval
        radio::RadioModel radio_model = radio::RadioModel::duty_cycled;
        std::vector<NodeId> inject_ids;
        Duration inject_offset{}; ///< injection time after the warm-up
        std::optional<Duration> time_limit; ///< after injection; default 4 * i_max

        Duration effective_time_limit() const;
        void validate() const;
    };

    /// Seed of replication `rep` derived from a base seed.
    std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t rep);

    /// One simulated network. Nodes spend one i_max warm-up holding the old
    /// version, each starting its first i_max interval at a uniform offset; at
    /// the end of the warm-up (plus the injection offset) the injected nodes
    /// adopt the new version. The run stops once every node holds the new
    /// version with I = i_max, or at the time limit.
    class Network
    {
    public:
        using TransmitObserver = std::function<void(std::int32_t node_index, const mac::Frame &frame, SimTime at)>;
        using MacObserver = std::function<void(std::int32_t node_index, const mac::MacEvent &ev)>;

        Network(const Scenario &scenario, std::uint64_t seed);
        ~Network();

        Network(const Network &) = delete;
        Network &operator=(const Network &) = delete;

        void set_transmit_observer(TransmitObserver obs) { on_transmit_ = std::move(obs); }
        void set_trace_hook(des::Engine::TraceHook hook) { engine_.set_trace_hook(std::move(hook)); }
        void set_delivery_observer(radio::RadioMedium::Observer obs) { delivery_observer_ = std::move(obs); }
        void set_mac_observer(MacObserver obs) { mac_observer_ = std::move(obs); }

        Metrics run();

        SimTime injection_time() const noexcept { return injection_time_; }
        des::Engine &engine() noexcept { return engine_; }
        const radio::RadioMedium &medium() const noexcept { return *medium_; }
        const trickle::TrickleTimer &trickle_at(std::size_t index) const { return *timers_.at(index); }
        const mac::CsmaMac &mac_at(std::size_t index) const { return *macs_.at(index); }
        std::size_t size() const noexcept { return timers_.size(); }

    private:
        void on_state_change(std::size_t index, const trickle::TrickleState &state);
        void on_mac_event(std::size_t index, const mac::MacEvent &ev);
        void on_deliver_up(std::size_t index, const mac::Frame &frame);
        void inject();
        bool counting() const noexcept { return engine_.now() >= injection_time_; }

        Scenario scenario_;
        std::uint64_t seed_;
        des::Engine engine_;
        std::vector<des::RngStream> streams_;
        std::unique_ptr<radio::RadioMedium> medium_;
        std::vector<std::unique_ptr<trickle::TrickleTimer>> timers_;
        std::vector<std::unique_ptr<mac::CsmaMac>> macs_;
        SimTime injection_time_{};
        std::uint64_t next_frame_id_ = 1;
        std::vector<bool> done_;
        std::size_t done_count_ = 0;
        Metrics metrics_;
        std::vector<SimTime> adopted_at_;
        TransmitObserver on_transmit_;
        radio::RadioMedium::Observer delivery_observer_;
        MacObserver mac_observer_;
    };

    Metrics run_replication(const Scenario &scenario, std::uint64_t seed);
} // namespace tricklemac::scenario
