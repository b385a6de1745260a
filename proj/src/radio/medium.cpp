#include "tricklemac/radio/medium.hpp"

#include "tricklemac/scenario/event_kinds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tricklemac::radio
{
    std::string_view to_string(RadioModel m)
    {
        return m == RadioModel::ideal ? "ideal" : "duty-cycled";
    }

    RadioModel parse_radio_model(std::string_view text)
    {
        if (text == "duty-cycled" || text == "contikimac")
        {
            return RadioModel::duty_cycled;
        }
        if (text == "ideal")
        {
            return RadioModel::ideal;
        }
        throw std::invalid_argument("unknown radio model '" + std::string(text) + "'");
    }

    void RdcConfig::validate() const
    {
        if (w <= Duration::zero())
        {
            throw std::invalid_argument("RDC: wake-up interval must be positive");
        }
        for (Duration p : phase)
        {
            if (p < Duration::zero() || p >= w)
            {
                throw std::invalid_argument("RDC: phase outside [0, w)");
            }
        }
    }

    Duration wakeup_interval_from_hz(double hz)
    {
        if (!(hz > 0.0))
        {
            throw std::invalid_argument("wake-up frequency must be positive");
        }
        return Duration{static_cast<std::int64_t>(std::llround(1e6 / hz))};
    }

    SimTime first_wakeup_at_or_after(Duration phase, Duration w, SimTime t)
    {
        const std::int64_t since = des::ticks_of(t) - phase.count();
        if (since <= 0)
        {
            return des::kTimeZero + phase;
        }
        const std::int64_t cycles = (since + w.count() - 1) / w.count();
        return des::kTimeZero + phase + w * cycles;
    }

    std::vector<SimTime> wakeup_cycle(Duration phase, Duration w, std::size_t count)
    {
        std::vector<SimTime> out;
        out.reserve(count);
        for (std::size_t j = 0; j < count; ++j)
        {
            out.push_back(des::kTimeZero + phase + w * static_cast<std::int64_t>(j));
        }
        return out;
    }

    std::vector<Duration> draw_phases(std::span<des::RngStream> streams, Duration w)
    {
        std::vector<Duration> phases;
        phases.reserve(streams.size());
        for (auto &s : streams)
        {
            phases.emplace_back(des::uniform_int(s, 0, w.count() - 1));
        }
        return phases;
    }

    bool Links::link(std::int32_t from, std::int32_t to) const
    {
        const auto &r = reaches.at(static_cast<std::size_t>(from));
        return std::find(r.begin(), r.end(), to) != r.end();
    }

    Links Links::unit_disk(std::span<const Position> positions, std::span<const double> ranges)
    {
        if (positions.size() != ranges.size())
        {
            throw std::invalid_argument("unit_disk: positions and ranges differ in size");
        }
        const std::size_t n = positions.size();
        Links l;
        l.reaches.resize(n);
        l.heard_by.resize(n);
        for (std::size_t a = 0; a < n; ++a)
        {
            for (std::size_t b = 0; b < n; ++b)
            {
                if (a == b)
                {
                    continue;
                }
                const double d = std::hypot(positions[a].x - positions[b].x, positions[a].y - positions[b].y);
                if (d <= ranges[a])
                {
                    l.reaches[a].push_back(static_cast<std::int32_t>(b));
                    l.heard_by[b].push_back(static_cast<std::int32_t>(a));
                }
            }
        }
        return l;
    }

    Links Links::from_edges(std::size_t n, std::span<const std::pair<std::int32_t, std::int32_t>> edges)
    {
        Links l;
        l.reaches.resize(n);
        l.heard_by.resize(n);
        auto add = [&](std::int32_t a, std::int32_t b) {
            auto &r = l.reaches[static_cast<std::size_t>(a)];
            if (std::find(r.begin(), r.end(), b) == r.end())
            {
                r.push_back(b);
                l.heard_by[static_cast<std::size_t>(b)].push_back(a);
            }
        };
        for (const auto &[a, b] : edges)
        {
            if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n || static_cast<std::size_t>(b) >= n || a == b)
            {
                throw std::invalid_argument("from_edges: bad edge " + std::to_string(a) + "-" + std::to_string(b));
            }
            add(a, b);
            add(b, a);
        }
        for (auto &r : l.reaches)
        {
            std::sort(r.begin(), r.end());
        }
        for (auto &h : l.heard_by)
        {
            std::sort(h.begin(), h.end());
        }
        return l;
    }

    RadioMedium::RadioMedium(des::Engine &engine, Links links, RdcConfig rdc)
        : engine_(engine), links_(std::move(links)), rdc_(std::move(rdc)), current_(links_.size())
    {
        rdc_.validate();
        if (rdc_.model == RadioModel::duty_cycled && rdc_.phase.size() != links_.size())
        {
            throw std::invalid_argument("RadioMedium: need one phase per node");
        }
    }

    bool RadioMedium::cca(std::int32_t node) const
    {
        if (rdc_.model == RadioModel::ideal)
        {
            return false;
        }
        const SimTime now = engine_.now();
        for (std::int32_t a : links_.heard_by[static_cast<std::size_t>(node)])
        {
            if (current_[static_cast<std::size_t>(a)].covers(now))
            {
                return true;
            }
        }
        return false;
    }

    int RadioMedium::audible_at(std::int32_t listener, SimTime t) const
    {
        int n = 0;
        for (std::int32_t a : links_.heard_by[static_cast<std::size_t>(listener)])
        {
            if (current_[static_cast<std::size_t>(a)].covers(t))
            {
                ++n;
            }
        }
        return n;
    }

    Duration RadioMedium::begin_broadcast(std::int32_t node, const mac::Frame &frame)
    {
        const SimTime now = engine_.now();
        const auto &listeners = links_.reaches[static_cast<std::size_t>(node)];
        if (rdc_.model == RadioModel::ideal)
        {
            for (std::int32_t l : listeners)
            {
                if (observer_)
                {
                    observer_(DeliveryRecord{node, l, frame.id, now, now, true});
                }
                if (receiver_)
                {
                    receiver_(l, frame);
                }
            }
            return Duration::zero();
        }

        auto &occ = current_[static_cast<std::size_t>(node)];
        if (occ.covers(now))
        {
            throw std::logic_error("RadioMedium: node " + std::to_string(node) + " already on air");
        }
        occ = Occupancy{node, frame.id, now, now + rdc_.w};
        if (keep_history_)
        {
            history_.push_back(occ);
        }
        for (std::int32_t l : listeners)
        {
            const SimTime at = first_wakeup_at_or_after(rdc_.phase[static_cast<std::size_t>(l)], rdc_.w, now);
            engine_.schedule(
                at, [this, node, l, frame, now] { deliver(node, l, frame, now); },
                {l, scenario::kRadioDelivery, static_cast<std::int64_t>(frame.id)});
        }
        return rdc_.w;
    }

    void RadioMedium::deliver(std::int32_t sender, std::int32_t listener, const mac::Frame &frame, SimTime sent_at)
    {
        const SimTime now = engine_.now();
        const bool listener_on_air = current_[static_cast<std::size_t>(listener)].covers(now);
        const bool ok = !listener_on_air && audible_at(listener, now) == 1;
        if (observer_)
        {
            observer_(DeliveryRecord{sender, listener, frame.id, sent_at, now, ok});
        }
        if (ok && receiver_)
        {
            receiver_(listener, frame);
        }
    }
} // namespace tricklemac::radio
