#include <doctest.h>

#include "tricklemac/scenario/network.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <vector>

using namespace tricklemac;
using namespace tricklemac::scenario;
using namespace std::chrono_literals;

namespace
{
    constexpr Duration kW = 125ms;

    Scenario make(Topology topo, std::vector<NodeId> inject, Duration i_min, unsigned doublings,
                  mac::MacVariant variant = mac::MacVariant::contiki_broadcast,
                  radio::RadioModel model = radio::RadioModel::duty_cycled)
    {
        Scenario s;
        s.topology = std::move(topo);
        s.trickle = trickle::TrickleParams::with_doublings(1, i_min, doublings);
        s.mac.bp = kW;
        s.mac.variant = variant;
        s.w = kW;
        s.radio_model = model;
        s.inject_ids = std::move(inject);
        return s;
    }

    bool same(const Metrics &a, const Metrics &b)
    {
        return a.update_delay == b.update_delay && a.updated_in_interval == b.updated_in_interval &&
               a.adoption_delay == b.adoption_delay && a.tx_count == b.tx_count && a.rtx_count == b.rtx_count &&
               a.attempts == b.attempts && a.csma_drops == b.csma_drops && a.cleansing_drops == b.cleansing_drops &&
               a.suppressions == b.suppressions && a.deliveries == b.deliveries && a.collisions == b.collisions &&
               a.queue_time_total == b.queue_time_total && a.timed_out == b.timed_out;
    }
} // namespace

TEST_CASE("scenario validation")
{
    auto s = make(make_bottleneck4(), {1, 2}, 500ms, 4);
    CHECK_NOTHROW(s.validate());
    CHECK(s.effective_time_limit() == 4 * s.trickle.i_max);
    auto bad = s;
    bad.inject_ids = {9};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = s;
    bad.inject_ids.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = s;
    bad.w = Duration::zero();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("replication seeds differ")
{
    CHECK(replication_seed(1, 0) != replication_seed(1, 1));
    CHECK(replication_seed(1, 0) != replication_seed(2, 0));
    CHECK(replication_seed(7, 3) == replication_seed(7, 3));
}

TEST_CASE("same seed gives identical metrics")
{
    const auto s = make(make_grid(4, 4, 10.0, 1), {1}, 250ms, 4, mac::MacVariant::contiki_broadcast_cleansing);
    const auto a = run_replication(s, 17);
    const auto b = run_replication(s, 17);
    const auto c = run_replication(s, 18);
    CHECK(same(a, b));
    CHECK_FALSE(same(a, c));
}

TEST_CASE("two-node ideal clique sends once in the first interval")
{
    auto s = make(make_clique(2), {1, 2}, 1s, 3, mac::MacVariant::contiki_broadcast, radio::RadioModel::ideal);
    for (std::uint64_t seed = 1; seed <= 50; ++seed)
    {
        Network net(s, seed);
        int first = 0;
        net.set_transmit_observer([&](std::int32_t, const mac::Frame &, SimTime at) {
            if (at >= net.injection_time() && at < net.injection_time() + 1s)
            {
                ++first;
            }
        });
        const auto m = net.run();
        CHECK(first == 1);
        CHECK_FALSE(m.timed_out);
    }
}

TEST_CASE("runs reconcile and finish across topologies and variants")
{
    const std::vector<std::pair<Topology, std::vector<NodeId>>> topologies{
        {make_bottleneck4(), {1, 2}},
        {make_clique(5), {1}},
        {make_grid(5, 5, 10.0, 1), {1}},
        {make_grid(5, 5, 10.0, 2), {13}},
        {make_custom({{1, 2}, {2, 3}, {3, 4}, {4, 5}}), {1}},
    };
    for (const auto &[topo, inject] : topologies)
    {
        for (auto variant : {mac::MacVariant::standard, mac::MacVariant::contiki_broadcast,
                             mac::MacVariant::contiki_broadcast_cleansing})
        {
            for (auto i_min : {250ms, 500ms})
            {
                const auto s = make(topo, inject, i_min, 4, variant);
                for (std::uint64_t seed = 1; seed <= 5; ++seed)
                {
                    CAPTURE(topo.name);
                    CAPTURE(static_cast<int>(variant));
                    CAPTURE(seed);
                    Network net(s, seed);
                    const auto m = net.run();
                    CHECK(m.ledger.reconciles());
                    CHECK_FALSE(m.timed_out);
                    if (variant != mac::MacVariant::contiki_broadcast_cleansing)
                    {
                        CHECK(m.cleansing_drops == 0);
                    }
                    CHECK(m.rtx_count <= m.attempts);
                    Duration latest{};
                    for (std::size_t v = 0; v < m.node_ids.size(); ++v)
                    {
                        CHECK(m.adoption_delay[v] >= Duration::zero());
                        CHECK(m.updated_in_interval[v] >= 0);
                        CHECK((m.updated_in_interval[v] == 0) == static_cast<bool>(m.injected[v]));
                        latest = std::max(latest, m.adoption_delay[v]);
                    }
                    CHECK(m.update_delay == latest);
                }
            }
        }
    }
}

TEST_CASE("node 4 only learns the update through node 3")
{
    const auto s = make(make_bottleneck4(), {1, 2}, 500ms, 4);
    for (std::uint64_t seed = 1; seed <= 30; ++seed)
    {
        Network net(s, seed);
        std::vector<std::int32_t> senders_to_4;
        net.set_delivery_observer([&](const radio::DeliveryRecord &r) {
            if (r.listener == 3 && r.delivered)
            {
                senders_to_4.push_back(r.sender);
            }
        });
        net.run();
        REQUIRE_FALSE(senders_to_4.empty());
        CHECK(std::all_of(senders_to_4.begin(), senders_to_4.end(), [](auto s) { return s == 2; }));
    }
}

TEST_CASE("run stops at the time limit")
{
    auto s = make(make_grid(5, 5, 10.0, 1), {1}, 500ms, 4);
    s.time_limit = 600ms;
    const auto m = run_replication(s, 3);
    CHECK(m.timed_out);
    CHECK(std::count(m.updated_in_interval.begin(), m.updated_in_interval.end(), kNeverUpdated) > 0);
    CHECK(m.update_delay >= 600ms);
}

TEST_CASE("every node ends at i_max with the new version")
{
    const auto s = make(make_grid(4, 4, 10.0, 1), {16}, 250ms, 3, mac::MacVariant::contiki_broadcast_cleansing);
    Network net(s, 5);
    const auto m = net.run();
    REQUIRE_FALSE(m.timed_out);
    for (std::size_t v = 0; v < net.size(); ++v)
    {
        CHECK(net.trickle_at(v).state().version == kNewVersion);
        CHECK(net.trickle_at(v).state().interval == s.trickle.i_max);
    }
}
