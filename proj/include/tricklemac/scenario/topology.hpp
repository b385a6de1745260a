#pragma once

#include "tricklemac/radio/medium.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tricklemac::scenario
{
    using NodeId = std::int32_t;
    using Edge = std::pair<NodeId, NodeId>;

    /// Node ids are user-facing labels; nodes are stored (and simulated) by index.
    struct Topology
    {
        std::string name;
        std::vector<NodeId> ids;
        std::vector<radio::Position> positions; ///< meters
        std::vector<double> ranges;             ///< meters, per node
        std::optional<std::vector<Edge>> explicit_edges; ///< by id; overrides unit-disk ranges

        std::size_t size() const noexcept { return ids.size(); }
        /// Throws std::out_of_range for an unknown id.
        std::size_t index_of(NodeId id) const;
        bool contains(NodeId id) const;

        radio::Links links() const;
        /// Undirected edges by id, each pair once with first < second.
        std::vector<Edge> edges() const;
        std::vector<NodeId> neighbors(NodeId id) const;

        /// Throws std::invalid_argument on duplicate ids or edges naming unknown nodes.
        void validate() const;
    };

    /// n nodes, all pairs adjacent. Ids 1..n.
    Topology make_clique(int n);

    /// Edges 1-2, 1-3, 2-3, 3-4: node 3 is the only way to node 4.
    Topology make_bottleneck4();

    /// rows x cols grid, `spacing` meters apart, radius 2 + 10R meters.
    /// Ids are row-major from 1 at the top-left corner.
    Topology make_grid(int rows = 10, int cols = 10, double spacing = 10.0, int R = 1);

    /// Nodes implied by an edge list, ids sorted ascending.
    Topology make_custom(std::vector<Edge> edges);

    /// Longest shortest path (hops); -1 if disconnected.
    int diameter(const Topology &topology);
} // namespace tricklemac::scenario
