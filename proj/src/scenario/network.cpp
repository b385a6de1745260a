#include "tricklemac/scenario/network.hpp"

#include "tricklemac/scenario/event_kinds.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tricklemac::scenario
{
    Duration Scenario::effective_time_limit() const
    {
        return time_limit.value_or(trickle.i_max * 4);
    }

    void Scenario::validate() const
    {
        topology.validate();
        trickle.validate();
        mac.validate();
        if (w <= Duration::zero())
        {
            throw std::invalid_argument("scenario: wake-up interval must be positive");
        }
        if (inject_ids.empty())
        {
            throw std::invalid_argument("scenario: no injection nodes");
        }
        for (NodeId id : inject_ids)
        {
            if (!topology.contains(id))
            {
                throw std::invalid_argument("scenario: unknown injection node " + std::to_string(id));
            }
        }
        if (inject_offset < Duration::zero())
        {
            throw std::invalid_argument("scenario: negative injection time");
        }
        if (effective_time_limit() <= Duration::zero())
        {
            throw std::invalid_argument("scenario: time limit must be positive");
        }
    }

    std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t rep)
    {
        return des::splitmix64(base_seed ^ des::splitmix64(rep + 1));
    }

    Network::Network(const Scenario &scenario, std::uint64_t seed) : scenario_(scenario), seed_(seed)
    {
        scenario_.validate();
        const std::size_t n = scenario_.topology.size();
        streams_.reserve(n);
        for (std::size_t v = 0; v < n; ++v)
        {
            streams_.emplace_back(seed, 0, v);
        }

        radio::RdcConfig rdc;
        rdc.w = scenario_.w;
        rdc.model = scenario_.radio_model;
        rdc.phase = radio::draw_phases(streams_, scenario_.w);
        medium_ = std::make_unique<radio::RadioMedium>(engine_, scenario_.topology.links(), rdc);
        medium_->set_receiver([this](std::int32_t listener, const mac::Frame &frame) {
            macs_[static_cast<std::size_t>(listener)]->on_incoming(frame);
        });
        medium_->set_observer([this](const radio::DeliveryRecord &rec) {
            if (counting())
            {
                ++(rec.delivered ? metrics_.deliveries : metrics_.collisions);
            }
            if (delivery_observer_)
            {
                delivery_observer_(rec);
            }
        });

        metrics_.seed = seed;
        metrics_.node_ids = scenario_.topology.ids;
        metrics_.injected.assign(n, false);
        metrics_.updated_in_interval.assign(n, kNeverUpdated);
        metrics_.adoption_delay.assign(n, Duration{-1});
        adopted_at_.assign(n, SimTime::max());
        done_.assign(n, false);

        for (std::size_t v = 0; v < n; ++v)
        {
            const auto id = static_cast<std::int32_t>(v);
            trickle::TrickleTimer::Callbacks tcb;
            tcb.transmit = [this, v, id](trickle::Version version, std::uint32_t interval_index) {
                mac::Frame f;
                f.id = next_frame_id_++;
                f.origin = id;
                f.version = version;
                f.origin_interval = interval_index;
                macs_[v]->enqueue(f);
            };
            tcb.suppressed = [this] {
                if (counting())
                {
                    ++metrics_.suppressions;
                }
            };
            tcb.changed = [this, v](const trickle::TrickleState &s) { on_state_change(v, s); };
            timers_.push_back(
                std::make_unique<trickle::TrickleTimer>(engine_, streams_[v], scenario_.trickle, id, std::move(tcb)));

            mac::CsmaMac::Hooks hooks;
            hooks.channel_busy = [this, id] { return medium_->cca(id); };
            hooks.transmit = [this, v, id](const mac::Frame &f) {
                if (on_transmit_)
                {
                    on_transmit_(id, f, engine_.now());
                }
                (void)v;
                return medium_->begin_broadcast(id, f);
            };
            hooks.deliver_up = [this, v](const mac::Frame &f) { on_deliver_up(v, f); };
            hooks.observe = [this, v](const mac::MacEvent &ev) { on_mac_event(v, ev); };
            macs_.push_back(std::make_unique<mac::CsmaMac>(engine_, streams_[v], scenario_.mac, id, std::move(hooks)));
        }

        // Warm-up: every node is mid-way through an i_max interval when the update arrives.
        const Duration i_max = scenario_.trickle.i_max;
        for (std::size_t v = 0; v < n; ++v)
        {
            const Duration offset{des::uniform_int(streams_[v], 0, i_max.count() - 1)};
            engine_.schedule(
                des::kTimeZero + offset, [this, v, i_max] { timers_[v]->start(kOldVersion, i_max); },
                {static_cast<std::int32_t>(v), kTrickleStart, 0});
        }
        injection_time_ = des::kTimeZero + i_max + scenario_.inject_offset;
        engine_.schedule(injection_time_, [this] { inject(); }, {-1, kInjection, 0});
    }

    Network::~Network()
    {
        // Components cancel their own events; drop them before the engine goes.
        macs_.clear();
        timers_.clear();
    }

    void Network::inject()
    {
        for (NodeId id : scenario_.inject_ids)
        {
            const std::size_t v = scenario_.topology.index_of(id);
            metrics_.injected[v] = true;
            if (adopted_at_[v] == SimTime::max())
            {
                adopted_at_[v] = engine_.now();
                metrics_.updated_in_interval[v] = 0;
            }
            timers_[v]->inject(kNewVersion);
        }
    }

    void Network::on_state_change(std::size_t index, const trickle::TrickleState &state)
    {
        const bool done = state.version == kNewVersion && state.interval == scenario_.trickle.i_max &&
                          timers_[index]->running();
        if (done != done_[index])
        {
            done_[index] = done;
            done ? ++done_count_ : --done_count_;
        }
    }

    void Network::on_deliver_up(std::size_t index, const mac::Frame &frame)
    {
        const trickle::ReceiveResult r = timers_[index]->receive(frame.version);
        if (r.classification == trickle::Consistency::inconsistent_newer && frame.version == kNewVersion &&
            adopted_at_[index] == SimTime::max())
        {
            adopted_at_[index] = engine_.now();
            metrics_.updated_in_interval[index] = static_cast<std::int32_t>(frame.origin_interval);
        }
    }

    void Network::on_mac_event(std::size_t index, const mac::MacEvent &ev)
    {
        if (mac_observer_)
        {
            mac_observer_(static_cast<std::int32_t>(index), ev);
        }
        auto &ledger = metrics_.ledger;
        const bool count = counting();
        auto record_queue_time = [&] {
            if (count)
            {
                metrics_.queue_time_total += ev.at - ev.frame.enqueued_at;
                ++metrics_.queue_samples;
            }
        };
        switch (ev.kind)
        {
        case mac::MacEventKind::enqueued:
            ++ledger.enqueued;
            break;
        case mac::MacEventKind::overflow_drop:
            ++ledger.overflow;
            if (count)
            {
                ++metrics_.overflow_drops;
            }
            break;
        case mac::MacEventKind::attempt:
            if (count)
            {
                ++metrics_.attempts;
                if (ev.frame.nb > 0)
                {
                    ++metrics_.rtx_count;
                }
            }
            break;
        case mac::MacEventKind::backoff:
            if (count)
            {
                ++metrics_.backoffs;
            }
            break;
        case mac::MacEventKind::transmit_start:
            ++ledger.transmitted;
            if (count)
            {
                ++metrics_.tx_count;
            }
            record_queue_time();
            break;
        case mac::MacEventKind::csma_drop:
            ++ledger.csma_dropped;
            if (count)
            {
                ++metrics_.csma_drops;
            }
            record_queue_time();
            break;
        case mac::MacEventKind::cleansing_purge:
            ++ledger.purged;
            if (count)
            {
                ++metrics_.cleansing_drops;
            }
            record_queue_time();
            break;
        case mac::MacEventKind::delivered_up:
            break;
        }
    }

    Metrics Network::run()
    {
        const SimTime stop = injection_time_ + scenario_.effective_time_limit();
        const std::size_t n = timers_.size();
        const auto result = engine_.run_until(stop, [this, n] { return done_count_ == n; });

        metrics_.timed_out = !(result.stopped_by_predicate);
        SimTime last = injection_time_;
        for (std::size_t v = 0; v < n; ++v)
        {
            if (adopted_at_[v] != SimTime::max())
            {
                metrics_.adoption_delay[v] = adopted_at_[v] - injection_time_;
                last = std::max(last, adopted_at_[v]);
            }
            else
            {
                last = std::max(last, engine_.now());
            }
        }
        metrics_.update_delay = last - injection_time_;

        std::uint64_t queued = 0;
        for (const auto &m : macs_)
        {
            queued += m->queue().size();
        }
        metrics_.ledger.in_queue_at_end = queued;
        return metrics_;
    }

    Metrics run_replication(const Scenario &scenario, std::uint64_t seed)
    {
        Network net(scenario, seed);
        return net.run();
    }
} // namespace tricklemac::scenario
