#pragma once

#include <cstdint>

namespace tricklemac::scenario
{
    // EventTag::kind values used in traces.
    enum EventKind : std::int32_t
    {
        kTrickleTimer = 1,
        kTrickleIntervalEnd = 2,
        kTrickleStart = 3,
        kInjection = 4,
        kMacAttempt = 5,
        kRadioDelivery = 6,
        kRadioEnd = 7,
    };
} // namespace tricklemac::scenario
