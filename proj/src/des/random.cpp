#include "tricklemac/des/random.hpp"

#include <limits>
#include <stdexcept>

namespace tricklemac::des
{
    std::uint64_t splitmix64(std::uint64_t x) noexcept
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    namespace
    {
        std::uint64_t stream_key(std::uint64_t seed, std::uint64_t replication, std::uint64_t node)
        {
            std::uint64_t h = splitmix64(seed);
            h = splitmix64(h ^ splitmix64(replication + 0x632be59bd9b4e019ULL));
            h = splitmix64(h ^ splitmix64(node + 0x85157af5ULL));
            return h;
        }
    } // namespace

    RngStream::RngStream(std::uint64_t seed, std::uint64_t replication, std::uint64_t node)
        : seed_(seed), replication_(replication), node_(node), engine_(stream_key(seed, replication, node))
    {
    }

    double RngStream::unit()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(RngStream &rng, double lo, double hi)
    {
        if (lo > hi)
        {
            throw std::logic_error("uniform: lo > hi");
        }
        if (lo == hi)
        {
            return lo;
        }
        // 53 random bits scaled onto [0, 1] inclusive.
        const double u = static_cast<double>(rng.next_u64() >> 11) / static_cast<double>((1ULL << 53) - 1);
        const double x = lo + (hi - lo) * u;
        return x > hi ? hi : x;
    }

    std::int64_t uniform_int(RngStream &rng, std::int64_t lo, std::int64_t hi)
    {
        if (lo > hi)
        {
            throw std::logic_error("uniform_int: lo > hi");
        }
        const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
        if (span == std::numeric_limits<std::uint64_t>::max())
        {
            return static_cast<std::int64_t>(rng.next_u64());
        }
        const std::uint64_t range = span + 1;
        // Rejection sampling on the largest multiple of range.
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % range + 1) % range;
        std::uint64_t x = rng.next_u64();
        while (x > limit)
        {
            x = rng.next_u64();
        }
        return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + x % range);
    }
} // namespace tricklemac::des
