#include "tricklemac/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace tricklemac::cli
{
    namespace
    {
        std::string_view trim(std::string_view s)
        {
            const auto first = s.find_first_not_of(" \t\r");
            if (first == std::string_view::npos)
            {
                return {};
            }
            const auto last = s.find_last_not_of(" \t\r");
            return s.substr(first, last - first + 1);
        }

        [[noreturn]] void fail(std::string_view key, const std::string &what)
        {
            throw ConfigError("config key '" + std::string(key) + "': " + what);
        }

        template <typename Int>
        Int parse_int(std::string_view key, std::string_view v)
        {
            Int out{};
            const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
            if (ec != std::errc{} || ptr != v.data() + v.size())
            {
                fail(key, "expected an integer, got '" + std::string(v) + "'");
            }
            return out;
        }

        double parse_real(std::string_view key, std::string_view v)
        {
            double out = 0.0;
            const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
            if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out))
            {
                fail(key, "expected a number, got '" + std::string(v) + "'");
            }
            return out;
        }

        std::vector<std::string_view> split(std::string_view v, char sep)
        {
            std::vector<std::string_view> out;
            while (true)
            {
                const auto pos = v.find(sep);
                out.push_back(trim(v.substr(0, pos)));
                if (pos == std::string_view::npos)
                {
                    break;
                }
                v.remove_prefix(pos + 1);
            }
            return out;
        }

        std::vector<scenario::Edge> parse_edges(std::string_view key, std::string_view v)
        {
            std::vector<scenario::Edge> edges;
            for (std::string_view item : split(v, ','))
            {
                const auto dash = item.find('-');
                if (dash == std::string_view::npos)
                {
                    fail(key, "edge '" + std::string(item) + "' is not of the form a-b");
                }
                const auto a = parse_int<std::int32_t>(key, trim(item.substr(0, dash)));
                const auto b = parse_int<std::int32_t>(key, trim(item.substr(dash + 1)));
                if (a == b)
                {
                    fail(key, "self-loop on node " + std::to_string(a));
                }
                edges.emplace_back(a, b);
            }
            return edges;
        }

        std::vector<scenario::NodeId> parse_ids(std::string_view key, std::string_view v)
        {
            std::vector<scenario::NodeId> ids;
            for (std::string_view item : split(v, ','))
            {
                ids.push_back(parse_int<std::int32_t>(key, item));
            }
            return ids;
        }

        TopologyKind parse_topology(std::string_view key, std::string_view v)
        {
            if (v == "clique")
            {
                return TopologyKind::clique;
            }
            if (v == "bottleneck4")
            {
                return TopologyKind::bottleneck4;
            }
            if (v == "grid")
            {
                return TopologyKind::grid;
            }
            if (v == "custom")
            {
                return TopologyKind::custom;
            }
            fail(key, "unknown topology '" + std::string(v) + "' (clique, bottleneck4, grid, custom)");
        }

        const std::vector<std::string_view> kKeys = {
            "topology",         "topology.n",         "topology.rows",       "topology.cols",
            "topology.spacing_m", "topology.R",       "topology.edges",      "trickle.k",
            "trickle.i_min_ms", "trickle.i_max_ms",   "trickle.doublings",   "trickle.eta",
            "mac.variant",      "mac.be_min",         "mac.be_max",          "mac.nb_max",
            "mac.queue_capacity", "mac.bp_ms",        "rdc.wakeup_hz",       "rdc.model",
            "injection.nodes",  "injection.time_ms",  "reps",                "seed",
            "run.time_limit_ms",
        };

        void validate(ScenarioConfig &c, const std::map<std::string, std::string, std::less<>> &seen)
        {
            if (!seen.contains("topology"))
            {
                throw ConfigError("config: missing required key 'topology'");
            }
            if (!seen.contains("trickle.i_min_ms"))
            {
                throw ConfigError("config: missing required key 'trickle.i_min_ms'");
            }
            if (c.topology.kind == TopologyKind::clique && (c.topology.n < 2 || c.topology.n > 1000))
            {
                fail("topology.n", "must lie in [2, 1000]");
            }
            if (c.topology.kind == TopologyKind::grid)
            {
                if (c.topology.rows < 1 || c.topology.cols < 1 || c.topology.rows * c.topology.cols < 2 ||
                    c.topology.rows * c.topology.cols > 100000)
                {
                    fail("topology.rows", "grid needs between 2 and 100000 nodes");
                }
                if (!(c.topology.spacing_m > 0.0))
                {
                    fail("topology.spacing_m", "must be positive");
                }
                if (c.topology.R < 1 || c.topology.R > 5)
                {
                    fail("topology.R", "must lie in [1, 5]");
                }
            }
            if (c.topology.kind == TopologyKind::custom && c.topology.edges.empty())
            {
                fail("topology.edges", "custom topology needs an edge list");
            }
            if (c.trickle.k == 0)
            {
                fail("trickle.k", "must be a positive integer or 'inf'");
            }
            if (!(c.trickle.i_min_ms > 0.0))
            {
                fail("trickle.i_min_ms", "must be positive");
            }
            if (!(c.trickle.eta >= 0.0 && c.trickle.eta < 1.0))
            {
                fail("trickle.eta", "must lie in [0, 1)");
            }
            if (c.trickle.doublings > 30)
            {
                fail("trickle.doublings", "must be at most 30");
            }
            if (c.trickle.i_max_ms)
            {
                if (seen.contains("trickle.doublings"))
                {
                    fail("trickle.i_max_ms", "give either trickle.i_max_ms or trickle.doublings, not both");
                }
                const double ratio = *c.trickle.i_max_ms / c.trickle.i_min_ms;
                const double d = std::log2(ratio);
                if (!(ratio >= 1.0) || std::abs(d - std::round(d)) > 1e-9 || d > 30)
                {
                    fail("trickle.i_max_ms", "must be i_min_ms doubled a whole number of times");
                }
                c.trickle.doublings = static_cast<unsigned>(std::lround(d));
                c.trickle.i_max_ms.reset();
            }
            if (!(c.rdc.wakeup_hz > 0.0) || c.rdc.wakeup_hz > 1e6)
            {
                fail("rdc.wakeup_hz", "must lie in (0, 1e6]");
            }
            if (c.rdc.model == radio::RadioModel::duty_cycled && c.m() < 2.0 - 1e-12)
            {
                fail("trickle.i_min_ms", "I_min / w = " + std::to_string(c.m()) +
                                             " is below 2; a broadcast could never finish inside the interval "
                                             "it was scheduled in (raise i_min_ms or rdc.wakeup_hz)");
            }
            if (c.mac.be_min > c.mac.be_max)
            {
                fail("mac.be_min", "must not exceed mac.be_max");
            }
            if (c.mac.be_max > 20)
            {
                fail("mac.be_max", "must be at most 20");
            }
            if (c.mac.nb_max > 1000)
            {
                fail("mac.nb_max", "must be at most 1000");
            }
            if (c.mac.queue_capacity == 0)
            {
                fail("mac.queue_capacity", "must be positive");
            }
            if (c.mac.bp_ms && !(*c.mac.bp_ms > 0.0))
            {
                fail("mac.bp_ms", "must be positive");
            }
            if (c.injection.time_ms < 0.0)
            {
                fail("injection.time_ms", "must be non-negative");
            }
            if (c.reps < 1)
            {
                fail("reps", "must be at least 1");
            }
            if (c.time_limit_ms && !(*c.time_limit_ms > 0.0))
            {
                fail("run.time_limit_ms", "must be positive");
            }
            try
            {
                c.to_scenario().validate();
            }
            catch (const std::exception &e)
            {
                throw ConfigError(std::string("config: ") + e.what());
            }
        }
    } // namespace

    const std::vector<std::string_view> &config_keys()
    {
        return kKeys;
    }

    scenario::Scenario ScenarioConfig::to_scenario() const
    {
        scenario::Scenario s;
        switch (topology.kind)
        {
        case TopologyKind::clique:
            s.topology = scenario::make_clique(topology.n);
            break;
        case TopologyKind::bottleneck4:
            s.topology = scenario::make_bottleneck4();
            break;
        case TopologyKind::grid:
            s.topology = scenario::make_grid(topology.rows, topology.cols, topology.spacing_m, topology.R);
            break;
        case TopologyKind::custom:
            s.topology = scenario::make_custom(topology.edges);
            break;
        }
        if (!topology.edges.empty())
        {
            s.topology.explicit_edges = topology.edges;
        }

        s.w = radio::wakeup_interval_from_hz(rdc.wakeup_hz);
        s.radio_model = rdc.model;
        s.trickle = trickle::TrickleParams::with_doublings(trickle.k, des::from_ms(trickle.i_min_ms),
                                                           trickle.doublings, trickle.eta);
        s.mac.be_min = mac.be_min;
        s.mac.be_max = mac.be_max;
        s.mac.nb_max = mac.nb_max;
        s.mac.queue_capacity = mac.queue_capacity;
        s.mac.variant = mac.variant;
        s.mac.bp = mac.bp_ms ? des::from_ms(*mac.bp_ms) : s.w;

        if (!injection.nodes.empty())
        {
            s.inject_ids = injection.nodes;
        }
        else if (topology.kind == TopologyKind::bottleneck4)
        {
            s.inject_ids = {1, 2};
        }
        else
        {
            s.inject_ids = {s.topology.ids.front()};
        }
        s.inject_offset = des::from_ms(injection.time_ms);
        if (time_limit_ms)
        {
            s.time_limit = des::from_ms(*time_limit_ms);
        }
        return s;
    }

    ScenarioConfig parse_config(std::string_view text)
    {
        std::map<std::string, std::string, std::less<>> kv;
        std::size_t line_no = 0;
        std::istringstream in{std::string(text)};
        std::string raw;
        while (std::getline(in, raw))
        {
            ++line_no;
            std::string_view line = raw;
            if (const auto hash = line.find('#'); hash != std::string_view::npos)
            {
                line = line.substr(0, hash);
            }
            line = trim(line);
            if (line.empty())
            {
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos)
            {
                throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
            }
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
            {
                throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
            }
            if (value.empty())
            {
                fail(key, "empty value");
            }
            if (!kv.emplace(key, value).second)
            {
                fail(key, "given more than once");
            }
        }

        ScenarioConfig c;
        for (const auto &[key, v] : kv)
        {
            if (key == "topology")
                c.topology.kind = parse_topology(key, v);
            else if (key == "topology.n")
                c.topology.n = parse_int<int>(key, v);
            else if (key == "topology.rows")
                c.topology.rows = parse_int<int>(key, v);
            else if (key == "topology.cols")
                c.topology.cols = parse_int<int>(key, v);
            else if (key == "topology.spacing_m")
                c.topology.spacing_m = parse_real(key, v);
            else if (key == "topology.R")
                c.topology.R = parse_int<int>(key, v);
            else if (key == "topology.edges")
                c.topology.edges = parse_edges(key, v);
            else if (key == "trickle.k")
                c.trickle.k = (v == "inf" || v == "infinity") ? trickle::kUnboundedRedundancy
                                                              : parse_int<std::uint32_t>(key, v);
            else if (key == "trickle.i_min_ms")
                c.trickle.i_min_ms = parse_real(key, v);
            else if (key == "trickle.i_max_ms")
                c.trickle.i_max_ms = parse_real(key, v);
            else if (key == "trickle.doublings")
                c.trickle.doublings = parse_int<unsigned>(key, v);
            else if (key == "trickle.eta")
                c.trickle.eta = parse_real(key, v);
            else if (key == "mac.variant")
            {
                try
                {
                    c.mac.variant = mac::parse_variant(v);
                }
                catch (const std::invalid_argument &e)
                {
                    fail(key, e.what());
                }
            }
            else if (key == "mac.be_min")
                c.mac.be_min = parse_int<unsigned>(key, v);
            else if (key == "mac.be_max")
                c.mac.be_max = parse_int<unsigned>(key, v);
            else if (key == "mac.nb_max")
                c.mac.nb_max = parse_int<unsigned>(key, v);
            else if (key == "mac.queue_capacity")
                c.mac.queue_capacity = parse_int<std::size_t>(key, v);
            else if (key == "mac.bp_ms")
                c.mac.bp_ms = parse_real(key, v);
            else if (key == "rdc.wakeup_hz")
                c.rdc.wakeup_hz = parse_real(key, v);
            else if (key == "rdc.model")
            {
                try
                {
                    c.rdc.model = radio::parse_radio_model(v);
                }
                catch (const std::invalid_argument &e)
                {
                    fail(key, e.what());
                }
            }
            else if (key == "injection.nodes")
                c.injection.nodes = parse_ids(key, v);
            else if (key == "injection.time_ms")
                c.injection.time_ms = parse_real(key, v);
            else if (key == "reps")
                c.reps = parse_int<std::uint64_t>(key, v);
            else if (key == "seed")
                c.seed = parse_int<std::uint64_t>(key, v);
            else if (key == "run.time_limit_ms")
                c.time_limit_ms = parse_real(key, v);
        }
        validate(c, kv);
        return c;
    }

    ScenarioConfig load_config(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
        {
            throw ConfigError("cannot read config file '" + path.string() + "'");
        }
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_config(buf.str());
    }
} // namespace tricklemac::cli
