#include <doctest.h>

#include "tricklemac/scenario/metrics.hpp"
#include "tricklemac/scenario/topology.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace tricklemac;
using namespace tricklemac::scenario;

TEST_CASE("clique")
{
    CHECK(make_clique(2).edges().size() == 1);
    CHECK(make_clique(5).edges().size() == 10);
    const auto c = make_clique(4);
    CHECK(c.ids == std::vector<NodeId>{1, 2, 3, 4});
    CHECK(diameter(c) == 1);
    const auto l = c.links();
    for (std::int32_t a = 0; a < 4; ++a)
    {
        for (std::int32_t b = 0; b < 4; ++b)
        {
            CHECK(l.link(a, b) == (a != b));
        }
    }
}

TEST_CASE("bottleneck")
{
    const auto t = make_bottleneck4();
    CHECK(t.edges() == std::vector<Edge>{{1, 2}, {1, 3}, {2, 3}, {3, 4}});
    CHECK(t.neighbors(4) == std::vector<NodeId>{3});
    CHECK(t.neighbors(3) == std::vector<NodeId>{1, 2, 4});
    const auto n1 = t.neighbors(1);
    CHECK(std::find(n1.begin(), n1.end(), 2) != n1.end());
    CHECK(diameter(t) == 2);
}

TEST_CASE("grid connectivity radius")
{
    SUBCASE("R = 1 gives the four-neighborhood")
    {
        const auto g = make_grid(10, 10, 10.0, 1);
        CHECK(g.ranges.front() == doctest::Approx(12.0));
        CHECK(g.neighbors(1) == std::vector<NodeId>{2, 11});
        CHECK(g.neighbors(12) == std::vector<NodeId>{2, 11, 13, 22});
        CHECK(g.edges().size() == 180);
        CHECK(diameter(g) == 18);
    }
    SUBCASE("R = 5 reaches 52 m")
    {
        const auto g = make_grid(10, 10, 10.0, 5);
        CHECK(g.ranges.front() == doctest::Approx(52.0));
        const auto n = g.neighbors(1);
        // (5, 0) at 50 m is in; (5, 1) at 50.99 m is in; (4, 3) at 50 m is in; (5, 2) at 53.9 m is not.
        CHECK(std::find(n.begin(), n.end(), 6) != n.end());
        CHECK(std::find(n.begin(), n.end(), 16) != n.end());
        CHECK(std::find(n.begin(), n.end(), 35) != n.end());
        CHECK(std::find(n.begin(), n.end(), 26) == n.end());
    }
    SUBCASE("ids are row-major from the top-left")
    {
        const auto g = make_grid(3, 4, 10.0, 1);
        CHECK(g.size() == 12);
        const auto &p = g.positions[g.index_of(7)];
        CHECK(p.x == doctest::Approx(20.0));
        CHECK(p.y == doctest::Approx(10.0));
    }
}

TEST_CASE("custom topology")
{
    const auto t = make_custom({{10, 20}, {20, 30}});
    CHECK(t.ids == std::vector<NodeId>{10, 20, 30});
    CHECK(t.neighbors(20) == std::vector<NodeId>{10, 30});
    CHECK(diameter(t) == 2);
    CHECK_THROWS_AS(t.index_of(99), std::out_of_range);
    const auto split = make_custom({{1, 2}, {3, 4}});
    CHECK(diameter(split) == -1);
}

TEST_CASE("topology validation")
{
    auto t = make_custom({{1, 2}});
    t.ids.push_back(1);
    t.positions.push_back({});
    t.ranges.push_back(1.0);
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    auto u = make_custom({{1, 2}});
    u.explicit_edges->push_back({1, 7});
    CHECK_THROWS_AS(u.validate(), std::invalid_argument);
}

TEST_CASE("summary statistics")
{
    SUBCASE("identical values")
    {
        const std::vector<double> v(1000, 42.0);
        const auto s = summarize(v);
        CHECK(s.mean == doctest::Approx(42.0));
        CHECK(s.stddev == doctest::Approx(0.0));
        CHECK(s.p50 == doctest::Approx(42.0));
        CHECK(worst_decile_mean(v) == doctest::Approx(42.0));
    }
    SUBCASE("one to ten")
    {
        std::vector<double> v;
        for (int i = 10; i >= 1; --i)
        {
            v.push_back(i);
        }
        CHECK(worst_decile_mean(v) == doctest::Approx(10.0));
        CHECK(percentile(v, 0.5) == doctest::Approx(5.5));
        CHECK(percentile(v, 0.0) == doctest::Approx(1.0));
        CHECK(percentile(v, 1.0) == doctest::Approx(10.0));
        CHECK(percentile(v, 0.9) == doctest::Approx(9.1));
        const auto s = summarize(v);
        CHECK(s.mean == doctest::Approx(5.5));
        CHECK(s.stddev == doctest::Approx(std::sqrt(55.0 / 6.0)));
        CHECK(s.min == 1.0);
        CHECK(s.max == 10.0);
    }
    SUBCASE("worst decile rounds up")
    {
        std::vector<double> v;
        for (int i = 1; i <= 11; ++i)
        {
            v.push_back(i);
        }
        CHECK(worst_decile_mean(v) == doctest::Approx(10.5));
    }
    SUBCASE("empty input")
    {
        CHECK_THROWS(percentile({}, 0.5));
        CHECK_THROWS(worst_decile_mean({}));
        CHECK_THROWS(aggregate(std::span<const Metrics>{}));
    }
}

TEST_CASE("aggregate over replications")
{
    std::vector<Metrics> runs(10);
    for (std::size_t i = 0; i < runs.size(); ++i)
    {
        runs[i].update_delay = des::from_ms(static_cast<double>(i + 1));
        runs[i].tx_count = 2 * (i + 1);
        runs[i].queue_time_total = des::from_ms(4.0);
        runs[i].queue_samples = 2;
    }
    runs[3].timed_out = true;
    const auto s = aggregate(runs);
    CHECK(s.count == 10);
    CHECK(s.timed_out == 1);
    CHECK(s.delay_ms.mean == doctest::Approx(5.5));
    CHECK(s.worst_decile_delay_ms == doctest::Approx(10.0));
    CHECK(s.tx.mean == doctest::Approx(11.0));
    CHECK(s.queue_ms.mean == doctest::Approx(2.0));
}

TEST_CASE("per-node lookups and ledger")
{
    Metrics m;
    m.node_ids = {5, 6};
    m.updated_in_interval = {0, 2};
    CHECK(m.updated_interval_of(6) == 2);
    CHECK_THROWS_AS(m.updated_interval_of(7), std::out_of_range);
    CHECK(m.mean_queue_ms() == 0.0);

    FrameLedger l;
    l.enqueued = 10;
    l.transmitted = 6;
    l.csma_dropped = 1;
    l.purged = 2;
    l.in_queue_at_end = 1;
    l.overflow = 4;
    CHECK(l.reconciles());
    l.purged = 3;
    CHECK_FALSE(l.reconciles());
}
