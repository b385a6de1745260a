#pragma once

#include <chrono>
#include <cstdint>

namespace tricklemac::des
{
    // Simulation clock. One tick is one microsecond; time never runs backwards.
    struct SimClock
    {
        using rep = std::int64_t;
        using period = std::micro;
        using duration = std::chrono::duration<rep, period>;
        using time_point = std::chrono::time_point<SimClock, duration>;
        static constexpr bool is_steady = true;
    };

    using Duration = SimClock::duration;
    using SimTime = SimClock::time_point;

    inline constexpr SimTime kTimeZero{};

    constexpr SimTime at_ticks(std::int64_t ticks) noexcept { return SimTime{Duration{ticks}}; }
    constexpr std::int64_t ticks_of(SimTime t) noexcept { return t.time_since_epoch().count(); }

    constexpr Duration from_ms(double ms) noexcept
    {
        return Duration{static_cast<std::int64_t>(ms * 1000.0 + (ms >= 0 ? 0.5 : -0.5))};
    }
    constexpr double to_ms(Duration d) noexcept { return static_cast<double>(d.count()) / 1000.0; }
} // namespace tricklemac::des
