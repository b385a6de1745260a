#include <doctest.h>

#include "tricklemac/cli/commands.hpp"
#include "tricklemac/cli/config.hpp"

#include <sstream>
#include <string>
#include <vector>

using namespace tricklemac;
using namespace tricklemac::cli;

namespace
{
    std::vector<std::string> lines(const std::string &text)
    {
        std::vector<std::string> out;
        std::istringstream in(text);
        for (std::string l; std::getline(in, l);)
        {
            out.push_back(l);
        }
        return out;
    }

    std::string error_of(const std::string &text)
    {
        try
        {
            parse_config(text);
        }
        catch (const ConfigError &e)
        {
            return e.what();
        }
        return {};
    }
} // namespace

TEST_CASE("minimal config takes defaults")
{
    const auto c = parse_config("topology = bottleneck4\ntrickle.i_min_ms = 500\n");
    CHECK(c.topology.kind == TopologyKind::bottleneck4);
    CHECK(c.trickle.k == 1);
    CHECK(c.trickle.eta == doctest::Approx(0.5));
    CHECK(c.mac.be_min == 0);
    CHECK(c.mac.be_max == 3);
    CHECK(c.mac.nb_max == 3);
    CHECK(c.mac.variant == mac::MacVariant::contiki_broadcast);
    CHECK(c.w_ms() == doctest::Approx(125.0));
    CHECK(c.m() == doctest::Approx(4.0));
    const auto s = c.to_scenario();
    CHECK(s.inject_ids == std::vector<scenario::NodeId>{1, 2});
    CHECK(s.mac.bp == des::from_ms(125.0));
    CHECK(s.trickle.i_max == s.trickle.i_min * 1024);
}

TEST_CASE("full config")
{
    const auto c = parse_config(R"(# grid run
topology = grid
topology.rows = 5
topology.cols = 6
topology.R = 2
topology.spacing_m = 8
trickle.k = 2
trickle.i_min_ms = 250
trickle.i_max_ms = 4000
mac.variant = contiki-broadcast+cleansing
mac.queue_capacity = 4
rdc.wakeup_hz = 8
injection.nodes = 3,4
injection.time_ms = 10
reps = 7
seed = 99
run.time_limit_ms = 60000
)");
    const auto s = c.to_scenario();
    CHECK(s.topology.size() == 30);
    CHECK(s.topology.ranges.front() == doctest::Approx(22.0));
    CHECK(s.trickle.k == 2);
    CHECK(s.trickle.doublings() == 4);
    CHECK(s.mac.cleansing());
    CHECK(s.mac.queue_capacity == 4);
    CHECK(s.inject_ids == std::vector<scenario::NodeId>{3, 4});
    CHECK(s.inject_offset == des::from_ms(10));
    CHECK(s.time_limit == des::from_ms(60000));
    CHECK(c.reps == 7);
    CHECK(c.seed == 99);
}

TEST_CASE("custom edges and unbounded k")
{
    const auto c = parse_config("topology = custom\ntopology.edges = 1-2, 2-3\ntrickle.i_min_ms = 500\n"
                                "trickle.k = inf\n");
    const auto s = c.to_scenario();
    CHECK(s.topology.edges() == std::vector<scenario::Edge>{{1, 2}, {2, 3}});
    CHECK(s.trickle.k == trickle::kUnboundedRedundancy);
    CHECK(s.inject_ids == std::vector<scenario::NodeId>{1});
}

TEST_CASE("config errors")
{
    CHECK(error_of("topology = bottleneck4\ntrickle.i_min_ms = 500\nfoo = 1\n").find("'foo'") != std::string::npos);
    CHECK(error_of("topology = bottleneck4\ntrickle.i_min_ms = 100\n").find("trickle.i_min_ms") !=
          std::string::npos);
    CHECK_FALSE(error_of("trickle.i_min_ms = 500\n").empty());
    CHECK_FALSE(error_of("topology = bottleneck4\n").empty());
    CHECK_FALSE(error_of("topology = ring\ntrickle.i_min_ms = 500\n").empty());
    CHECK_FALSE(error_of("topology = bottleneck4\ntopology = grid\ntrickle.i_min_ms = 500\n").empty());
    CHECK_FALSE(error_of("topology = bottleneck4\ntrickle.i_min_ms =\n").empty());
    CHECK_FALSE(error_of("topology = bottleneck4\ntrickle.i_min_ms = 500\ntrickle.i_max_ms = 3000\n").empty());
    CHECK_FALSE(error_of("topology = bottleneck4\ntrickle.i_min_ms = 500\ntrickle.i_max_ms = 4000\n"
                         "trickle.doublings = 3\n")
                    .empty());
    CHECK_FALSE(error_of("topology = bottleneck4\ntrickle.i_min_ms = 500\nmac.variant = aloha\n").empty());
    CHECK_FALSE(error_of("topology = bottleneck4\ntrickle.i_min_ms = 500\nmac.be_min = x\n").empty());
    CHECK_FALSE(error_of("topology = bottleneck4\ntrickle.i_min_ms = 500\ninjection.nodes = 9\n").empty());
    CHECK_FALSE(error_of("just text\n").empty());
    CHECK_THROWS_AS(load_config("/nonexistent/dir/x.cfg"), ConfigError);
}

TEST_CASE("ideal radio accepts small i_min")
{
    const auto c = parse_config("topology = clique\ntopology.n = 3\ntrickle.i_min_ms = 10\nrdc.model = ideal\n");
    CHECK(c.to_scenario().radio_model == radio::RadioModel::ideal);
}

TEST_CASE("every documented key is accepted")
{
    CHECK(config_keys().size() >= 20);
}

TEST_CASE("ranges")
{
    const auto i = parse_int_range("2:5");
    CHECK(i.lo == 2);
    CHECK(i.hi == 5);
    CHECK(parse_int_range("3").hi == 3);
    CHECK(parse_real_range("2:14:2").values() == std::vector<double>{2, 4, 6, 8, 10, 12, 14});
    CHECK(parse_real_range("10").values() == std::vector<double>{10});
    CHECK(parse_real_range("2:3:0.5").values().size() == 3);
    CHECK_THROWS_AS(parse_int_range("5:2"), UsageError);
    CHECK_THROWS_AS(parse_int_range("a"), UsageError);
    CHECK_THROWS_AS(parse_real_range("2:14:0"), UsageError);
    CHECK_THROWS_AS(parse_real_range("2:x"), UsageError);
}

TEST_CASE("analyze table")
{
    std::ostringstream out;
    cmd_analyze({2, 2}, parse_real_range("2:14:2"), out);
    const auto l = lines(out.str());
    REQUIRE(l.size() == 8);
    CHECK(l[0].rfind("n,m,p_bo_n,expected_redundant,p_n_b_0", 0) == 0);
    CHECK(l[5].rfind("2,10,0.186666667", 0) == 0);
}

TEST_CASE("mc output is reproducible and close to the closed form")
{
    std::ostringstream a, b, c;
    cmd_mc(2, 10, 1'000'000, 5, a);
    cmd_mc(2, 10, 1'000'000, 5, b);
    cmd_mc(2, 10, 1'000'000, 6, c);
    CHECK(a.str() == b.str());
    CHECK(a.str() != c.str());
    const auto l = lines(a.str());
    REQUIRE(l.size() == 2);
    CHECK(l[0].find("p_backoff") != std::string::npos);

    std::ostringstream one;
    cmd_mc(3, 4, 1, 1, one);
    CHECK(lines(one.str()).size() == 2);
    CHECK_THROWS_AS(cmd_mc(1, 4, 10, 1, one), UsageError);
}

TEST_CASE("run output")
{
    auto c = parse_config("topology = bottleneck4\ntrickle.i_min_ms = 500\ntrickle.doublings = 4\n"
                          "mac.variant = contiki-broadcast+cleansing\nreps = 20\nseed = 4\n");
    std::ostringstream a, b;
    const auto ra = cmd_run(c, a, 1);
    cmd_run(c, b, 3);
    CHECK(a.str() == b.str());
    const auto l = lines(a.str());
    REQUIRE(l.size() == 1 + 20 + 5);
    CHECK(l[0] == "rep,seed,delay_ms,updated_interval_per_sink,tx,rtx,csma_drops,cleansing_drops,mean_queue_ms,"
                  "suppressions,timed_out");
    CHECK(l[1].rfind("0,", 0) == 0);
    CHECK(l[21].rfind("mean,", 0) == 0);
    CHECK(l[25].rfind("worst_decile,", 0) == 0);
    CHECK(ra.metrics.size() == 20);
    CHECK(ra.timed_out == 0);
    CHECK(l[1].find(";4:") != std::string::npos);
}
