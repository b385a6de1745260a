#include <doctest.h>

#include "tricklemac/des/engine.hpp"
#include "tricklemac/trickle/trickle.hpp"

#include <chrono>
#include <stdexcept>
#include <vector>

using namespace tricklemac;
using namespace tricklemac::trickle;
using namespace std::chrono_literals;

namespace
{
    TrickleParams params(Duration i_min = 1s, unsigned doublings = 2, std::uint32_t k = 1, double eta = 0.5)
    {
        return TrickleParams::with_doublings(k, i_min, doublings, eta);
    }

    TrickleState state_with(Duration interval, Version version, std::uint32_t counter = 0)
    {
        TrickleState s;
        s.interval = interval;
        s.version = version;
        s.counter = counter;
        return s;
    }
} // namespace

TEST_CASE("parameters")
{
    const auto p = TrickleParams::with_doublings(1, 250ms, 10);
    CHECK(p.i_max == 256s);
    CHECK(p.doublings() == 10);
    CHECK_NOTHROW(p.validate());

    TrickleParams bad = p;
    bad.i_max = 300s;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.eta = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.i_min = Duration::zero();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.k = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("start_interval draws t in [eta I, I]")
{
    des::RngStream rng(1, 0, 0);
    const auto p4 = params(4s, 0);
    SUBCASE("eta 1/2")
    {
        for (int i = 0; i < 2000; ++i)
        {
            const auto s = start_interval(state_with(4s, 1, 3), p4, rng, des::kTimeZero);
            REQUIRE(s.fire_at >= des::kTimeZero + 2s);
            REQUIRE(s.fire_at <= des::kTimeZero + 4s);
            REQUIRE(s.counter == 0);
        }
    }
    SUBCASE("eta 0")
    {
        const auto p0 = params(4s, 0, 1, 0.0);
        des::SimTime lo = des::kTimeZero + 4s;
        for (int i = 0; i < 2000; ++i)
        {
            const auto s = start_interval(state_with(4s, 1), p0, rng, des::kTimeZero);
            REQUIRE(s.fire_at >= des::kTimeZero);
            REQUIRE(s.fire_at <= des::kTimeZero + 4s);
            lo = std::min(lo, s.fire_at);
        }
        CHECK(lo < des::kTimeZero + 100ms);
    }
    SUBCASE("relative to now")
    {
        const auto now = des::kTimeZero + 10s;
        const auto s = start_interval(state_with(4s, 1), p4, rng, now);
        CHECK(s.interval_start == now);
        CHECK(s.fire_at >= now + 2s);
        CHECK(s.fire_at <= now + 4s);
        CHECK(s.interval_index == 1);
    }
}

TEST_CASE("timer decision")
{
    CHECK(on_timer(state_with(1s, 1, 0), params()) == TimerDecision::transmit);
    CHECK(on_timer(state_with(1s, 1, 1), params()) == TimerDecision::suppress);
    CHECK(on_timer(state_with(1s, 1, 2), params(1s, 2, 3)) == TimerDecision::transmit);
    CHECK(on_timer(state_with(1s, 1, 1000), params(1s, 2, kUnboundedRedundancy)) == TimerDecision::transmit);
}

TEST_CASE("receive")
{
    des::RngStream rng(3, 0, 0);
    const auto p = params(1s, 2);
    const auto now = des::kTimeZero + 7s;

    SUBCASE("equal version counts")
    {
        const auto r = on_receive(state_with(4s, 5, 0), p, 5, rng, now);
        CHECK(r.classification == Consistency::consistent);
        CHECK(r.state.counter == 1);
        CHECK_FALSE(r.restarted);
        CHECK(r.state.interval == 4s);
    }
    SUBCASE("newer version at i_max resets")
    {
        auto s = state_with(4s, 5, 1);
        s.interval_index = 9;
        const auto r = on_receive(s, p, 6, rng, now);
        CHECK(r.classification == Consistency::inconsistent_newer);
        CHECK(r.state.version == 6);
        CHECK(r.state.interval == 1s);
        CHECK(r.restarted);
        CHECK(r.state.interval_start == now);
        CHECK(r.state.counter == 0);
        CHECK(r.state.interval_index == 1);
    }
    SUBCASE("newer version at i_min adopts without restart")
    {
        auto s = state_with(1s, 5, 0);
        s.fire_at = des::kTimeZero + 6500ms;
        s.interval_start = des::kTimeZero + 6s;
        const auto r = on_receive(s, p, 6, rng, now);
        CHECK(r.state.version == 6);
        CHECK_FALSE(r.restarted);
        CHECK(r.state.fire_at == s.fire_at);
        CHECK(r.state.interval_start == s.interval_start);
        CHECK(r.state.interval_index == 1);
    }
    SUBCASE("older version keeps ours and resets")
    {
        auto s = state_with(2s, 5, 0);
        s.interval_index = 3;
        const auto r = on_receive(s, p, 4, rng, now);
        CHECK(r.classification == Consistency::inconsistent_older);
        CHECK(r.state.version == 5);
        CHECK(r.state.interval == 1s);
        CHECK(r.restarted);
        CHECK(r.state.interval_index == 4);
    }
    SUBCASE("older version at i_min does nothing")
    {
        const auto s = state_with(1s, 5, 0);
        const auto r = on_receive(s, p, 4, rng, now);
        CHECK_FALSE(r.restarted);
        CHECK(r.state.counter == 0);
        CHECK(r.state.version == 5);
    }
}

TEST_CASE("interval end doubles up to i_max")
{
    des::RngStream rng(4, 0, 0);
    const auto p = params(1s, 2);
    auto s = on_interval_end(state_with(1s, 1), p, rng, des::kTimeZero);
    CHECK(s.interval == 2s);
    s = on_interval_end(s, p, rng, des::kTimeZero);
    CHECK(s.interval == 4s);
    s = on_interval_end(s, p, rng, des::kTimeZero);
    CHECK(s.interval == 4s);
}

TEST_CASE("ten doublings from 250 ms reach i_max after ten interval ends")
{
    des::Engine engine;
    des::RngStream rng(5, 0, 0);
    const auto p = TrickleParams::with_doublings(1, 250ms, 10);
    int ends = 0;
    TrickleTimer::Callbacks cb;
    Duration last{};
    cb.changed = [&](const TrickleState &s) {
        if (s.interval != last)
        {
            last = s.interval;
            ++ends;
        }
    };
    TrickleTimer timer(engine, rng, p, 0, cb);
    timer.inject(1);
    // The first change is the injection itself.
    const auto r = engine.run_until(des::kTimeZero + 250ms * 1023 - 1ms);
    CHECK_FALSE(r.exhausted);
    CHECK(timer.state().interval == 128s);
    engine.run_until(des::kTimeZero + 250ms * 1023);
    CHECK(timer.state().interval == 256s);
    CHECK(ends == 11);
    CHECK(timer.state().interval_index == 11);
}

TEST_CASE("timer transmits once per interval when alone")
{
    des::Engine engine;
    des::RngStream rng(6, 0, 0);
    const auto p = params(1s, 3);
    std::vector<std::pair<des::SimTime, std::uint32_t>> sent;
    TrickleTimer::Callbacks cb;
    cb.transmit = [&](Version v, std::uint32_t idx) {
        CHECK(v == 2);
        sent.emplace_back(engine.now(), idx);
    };
    TrickleTimer timer(engine, rng, p, 0, cb);
    timer.inject(2);
    engine.run_until(des::kTimeZero + 15s);
    REQUIRE(sent.size() == 4);
    // Intervals [0,1) [1,3) [3,7) [7,15) then i_max.
    const std::vector<std::pair<int, int>> windows{{0, 1000}, {1000, 3000}, {3000, 7000}, {7000, 15000}};
    for (std::size_t i = 0; i < windows.size(); ++i)
    {
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(sent[i].first - des::kTimeZero).count();
        const auto lo = windows[i].first, hi = windows[i].second;
        CHECK(ms >= lo + (hi - lo) / 2);
        CHECK(ms <= hi);
        CHECK(sent[i].second == i + 1);
    }
}

TEST_CASE("consistent receptions suppress the timer")
{
    des::Engine engine;
    des::RngStream rng(7, 0, 0);
    const auto p = params(1s, 0);
    int sent = 0, suppressed = 0;
    TrickleTimer::Callbacks cb;
    cb.transmit = [&](Version, std::uint32_t) { ++sent; };
    cb.suppressed = [&] { ++suppressed; };
    TrickleTimer timer(engine, rng, p, 0, cb);
    timer.start(3, 1s);
    engine.schedule(des::kTimeZero + 100ms, [&] { timer.receive(3); });
    engine.run_until(des::kTimeZero + 1s);
    CHECK(sent == 0);
    CHECK(suppressed == 1);
}

TEST_CASE("reset cancels the pending timer")
{
    des::Engine engine;
    des::RngStream rng(8, 0, 0);
    const auto p = params(1s, 3);
    std::vector<des::SimTime> sent;
    TrickleTimer::Callbacks cb;
    cb.transmit = [&](Version, std::uint32_t) { sent.push_back(engine.now()); };
    TrickleTimer timer(engine, rng, p, 0, cb);
    timer.start(1, 8s);
    const auto first_fire = timer.state().fire_at;
    engine.schedule(des::kTimeZero + 1s, [&] { timer.receive(2); });
    engine.run_until(des::kTimeZero + 2s);
    REQUIRE(sent.size() == 1);
    CHECK(sent[0] != first_fire);
    CHECK(sent[0] >= des::kTimeZero + 1500ms);
    CHECK(timer.state().version == 2);
    CHECK(engine.size() == 2);
}

TEST_CASE("dormant timer records versions only")
{
    des::Engine engine;
    des::RngStream rng(9, 0, 0);
    TrickleTimer timer(engine, rng, params(), 0, {});
    const auto r = timer.receive(4);
    CHECK(r.classification == Consistency::inconsistent_newer);
    CHECK(timer.state().version == 4);
    CHECK_FALSE(timer.running());
    CHECK(engine.size() == 0);
    timer.start(1, 1s);
    CHECK(timer.state().version == 4);
    CHECK_THROWS_AS(timer.start(1, 500ms), std::logic_error);
}

TEST_CASE("destroying a timer cancels its events")
{
    des::Engine engine;
    des::RngStream rng(10, 0, 0);
    {
        TrickleTimer timer(engine, rng, params(), 0, {});
        timer.inject(1);
        CHECK(engine.size() == 2);
    }
    CHECK(engine.size() == 0);
}
