#pragma once

#include "tricklemac/mac/csma.hpp"
#include "tricklemac/radio/medium.hpp"
#include "tricklemac/scenario/network.hpp"
#include "tricklemac/scenario/topology.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tricklemac::cli
{
    class ConfigError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    enum class TopologyKind
    {
        clique,
        bottleneck4,
        grid,
        custom,
    };

    /// Scenario configuration. Durations are in milliseconds.
    ///
    /// Text form is one `key = value` per line, `#` starts a comment:
    ///
    ///     topology = bottleneck4
    ///     trickle.i_min_ms = 500
    ///     mac.variant = contiki-broadcast+cleansing
    struct ScenarioConfig
    {
        struct Topology
        {
            TopologyKind kind = TopologyKind::bottleneck4;
            int n = 2;
            int rows = 10;
            int cols = 10;
            double spacing_m = 10.0;
            int R = 1;
            std::vector<scenario::Edge> edges; ///< override (required for custom)
        } topology;

        struct Trickle
        {
            std::uint32_t k = 1;
            double i_min_ms = 0.0;
            std::optional<double> i_max_ms;
            unsigned doublings = 10;
            double eta = 0.5;
        } trickle;

        struct Mac
        {
            mac::MacVariant variant = mac::MacVariant::contiki_broadcast;
            unsigned be_min = 0;
            unsigned be_max = 3;
            unsigned nb_max = 3;
            std::size_t queue_capacity = 8;
            std::optional<double> bp_ms; ///< defaults to w
        } mac;

        struct Rdc
        {
            double wakeup_hz = 8.0;
            radio::RadioModel model = radio::RadioModel::duty_cycled;
        } rdc;

        struct Injection
        {
            std::vector<scenario::NodeId> nodes; ///< empty: topology default
            double time_ms = 0.0;
        } injection;

        std::uint64_t reps = 1;
        std::uint64_t seed = 1;
        std::optional<double> time_limit_ms;

        double w_ms() const { return 1000.0 / rdc.wakeup_hz; }
        /// I_min / w.
        double m() const { return trickle.i_min_ms / w_ms(); }

        scenario::Scenario to_scenario() const;
    };

    /// Parse and validate; throws ConfigError naming the offending key.
    ScenarioConfig parse_config(std::string_view text);

    ScenarioConfig load_config(const std::filesystem::path &path);

    /// Keys accepted by parse_config.
    const std::vector<std::string_view> &config_keys();
} // namespace tricklemac::cli
