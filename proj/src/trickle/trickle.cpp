#include "tricklemac/trickle/trickle.hpp"

#include "tricklemac/scenario/event_kinds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tricklemac::trickle
{
    TrickleParams TrickleParams::with_doublings(std::uint32_t k, Duration i_min, unsigned doublings, double eta)
    {
        if (doublings >= 40)
        {
            throw std::invalid_argument("Trickle: too many doublings");
        }
        TrickleParams p;
        p.k = k;
        p.i_min = i_min;
        p.i_max = i_min * (std::int64_t{1} << doublings);
        p.eta = eta;
        p.validate();
        return p;
    }

    void TrickleParams::validate() const
    {
        if (k == 0)
        {
            throw std::invalid_argument("Trickle: k must be positive");
        }
        if (i_min <= Duration::zero())
        {
            throw std::invalid_argument("Trickle: i_min must be positive");
        }
        if (i_max < i_min)
        {
            throw std::invalid_argument("Trickle: i_max < i_min");
        }
        if (i_max.count() % i_min.count() != 0)
        {
            throw std::invalid_argument("Trickle: i_max must be i_min doubled a whole number of times");
        }
        const auto ratio = static_cast<std::uint64_t>(i_max.count() / i_min.count());
        if ((ratio & (ratio - 1)) != 0)
        {
            throw std::invalid_argument("Trickle: i_max must be i_min doubled a whole number of times");
        }
        if (!(eta >= 0.0 && eta < 1.0))
        {
            throw std::invalid_argument("Trickle: eta must lie in [0, 1)");
        }
    }

    unsigned TrickleParams::doublings() const
    {
        unsigned d = 0;
        for (auto i = i_min; i < i_max; i *= 2)
        {
            ++d;
        }
        return d;
    }

    TrickleState start_interval(TrickleState state, const TrickleParams &params, des::RngStream &rng, SimTime now)
    {
        state.counter = 0;
        state.interval_start = now;
        const std::int64_t len = state.interval.count();
        const auto listen = static_cast<std::int64_t>(std::ceil(params.eta * static_cast<double>(len)));
        state.fire_at = now + Duration{des::uniform_int(rng, listen, len)};
        ++state.interval_index;
        return state;
    }

    TimerDecision on_timer(const TrickleState &state, const TrickleParams &params)
    {
        if (params.k == kUnboundedRedundancy || state.counter < params.k)
        {
            return TimerDecision::transmit;
        }
        return TimerDecision::suppress;
    }

    ReceiveResult on_receive(TrickleState state, const TrickleParams &params, Version incoming, des::RngStream &rng,
                             SimTime now)
    {
        ReceiveResult result{state, Consistency::consistent, false};
        if (incoming == state.version)
        {
            ++result.state.counter;
            return result;
        }

        if (incoming > state.version)
        {
            result.classification = Consistency::inconsistent_newer;
            result.state.version = incoming;
            result.state.interval_index = 1;
        }
        else
        {
            result.classification = Consistency::inconsistent_older;
        }

        if (result.state.interval > params.i_min)
        {
            result.state.interval = params.i_min;
            if (result.classification == Consistency::inconsistent_newer)
            {
                result.state.interval_index = 0;
            }
            result.state = start_interval(result.state, params, rng, now);
            result.restarted = true;
        }
        return result;
    }

    TrickleState on_interval_end(TrickleState state, const TrickleParams &params, des::RngStream &rng, SimTime now)
    {
        state.interval = std::min(state.interval * 2, params.i_max);
        return start_interval(state, params, rng, now);
    }

    TrickleTimer::TrickleTimer(des::Engine &engine, des::RngStream &rng, const TrickleParams &params,
                               std::int32_t node_id, Callbacks callbacks)
        : engine_(engine), rng_(rng), params_(params), node_id_(node_id), callbacks_(std::move(callbacks))
    {
        params_.validate();
    }

    TrickleTimer::~TrickleTimer()
    {
        cancel_events();
    }

    void TrickleTimer::start(Version version, Duration interval)
    {
        if (interval < params_.i_min || interval > params_.i_max)
        {
            throw std::logic_error("TrickleTimer::start: interval outside [i_min, i_max]");
        }
        cancel_events();
        const Version known = state_.version;
        state_ = TrickleState{};
        state_.version = std::max(version, known);
        state_.interval = interval;
        running_ = true;
        begin_interval();
    }

    void TrickleTimer::inject(Version version)
    {
        cancel_events();
        state_.version = version;
        state_.interval = params_.i_min;
        state_.interval_index = 0;
        running_ = true;
        begin_interval();
    }

    ReceiveResult TrickleTimer::receive(Version incoming)
    {
        if (!running_)
        {
            // Not started yet: record the version, leave timers alone.
            ReceiveResult dormant{state_, Consistency::consistent, false};
            if (incoming > state_.version)
            {
                dormant.classification = Consistency::inconsistent_newer;
                dormant.state.version = incoming;
                dormant.state.interval_index = 1;
            }
            else if (incoming < state_.version)
            {
                dormant.classification = Consistency::inconsistent_older;
            }
            state_ = dormant.state;
            notify();
            return dormant;
        }
        ReceiveResult result = on_receive(state_, params_, incoming, rng_, engine_.now());
        state_ = result.state;
        if (result.restarted)
        {
            cancel_events();
            timer_event_ = engine_.schedule(state_.fire_at, [this] { handle_timer(); },
                                            {node_id_, scenario::kTrickleTimer, 0});
            end_event_ = engine_.schedule(state_.interval_start + state_.interval, [this] { handle_interval_end(); },
                                          {node_id_, scenario::kTrickleIntervalEnd, 0});
        }
        notify();
        return result;
    }

    void TrickleTimer::begin_interval()
    {
        state_ = start_interval(state_, params_, rng_, engine_.now());
        // The timer is scheduled first so that t == interval end fires before the end.
        timer_event_ = engine_.schedule(state_.fire_at, [this] { handle_timer(); },
                                        {node_id_, scenario::kTrickleTimer, 0});
        end_event_ = engine_.schedule(state_.interval_start + state_.interval, [this] { handle_interval_end(); },
                                      {node_id_, scenario::kTrickleIntervalEnd, 0});
        notify();
    }

    void TrickleTimer::handle_timer()
    {
        timer_event_ = {};
        if (on_timer(state_, params_) == TimerDecision::transmit)
        {
            if (callbacks_.transmit)
            {
                callbacks_.transmit(state_.version, state_.interval_index);
            }
        }
        else if (callbacks_.suppressed)
        {
            callbacks_.suppressed();
        }
    }

    void TrickleTimer::handle_interval_end()
    {
        end_event_ = {};
        state_.interval = std::min(state_.interval * 2, params_.i_max);
        begin_interval();
    }

    void TrickleTimer::cancel_events()
    {
        if (timer_event_.valid())
        {
            engine_.cancel(timer_event_);
            timer_event_ = {};
        }
        if (end_event_.valid())
        {
            engine_.cancel(end_event_);
            end_event_ = {};
        }
    }

    void TrickleTimer::notify()
    {
        if (callbacks_.changed)
        {
            callbacks_.changed(state_);
        }
    }
} // namespace tricklemac::trickle
