#pragma once

#include <cstdint>
#include <random>

namespace tricklemac::des
{
    /// Deterministic random stream keyed by (seed, replication, node).
    ///
    /// The engine is std::mt19937_64, whose output sequence is fixed by the
    /// standard. The draws below are implemented here rather than through
    /// std::uniform_*_distribution, whose algorithms differ between standard
    /// libraries, so traces stay identical across toolchains.
    class RngStream
    {
    public:
        RngStream(std::uint64_t seed, std::uint64_t replication, std::uint64_t node);

        std::uint64_t next_u64() { return engine_(); }

        /// Uniform real in [0, 1).
        double unit();

        std::uint64_t seed() const noexcept { return seed_; }
        std::uint64_t replication() const noexcept { return replication_; }
        std::uint64_t node() const noexcept { return node_; }

    private:
        std::uint64_t seed_;
        std::uint64_t replication_;
        std::uint64_t node_;
        std::mt19937_64 engine_;
    };

    std::uint64_t splitmix64(std::uint64_t x) noexcept;

    /// Uniform real in [lo, hi]. lo > hi throws std::logic_error.
    double uniform(RngStream &rng, double lo, double hi);

    /// Uniform integer in [lo, hi] (inclusive, unbiased). lo > hi throws std::logic_error.
    std::int64_t uniform_int(RngStream &rng, std::int64_t lo, std::int64_t hi);
} // namespace tricklemac::des
