#include "tricklemac/scenario/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>

namespace tricklemac::scenario
{
    std::size_t Topology::index_of(NodeId id) const
    {
        const auto it = std::find(ids.begin(), ids.end(), id);
        if (it == ids.end())
        {
            throw std::out_of_range("unknown node id " + std::to_string(id));
        }
        return static_cast<std::size_t>(it - ids.begin());
    }

    bool Topology::contains(NodeId id) const
    {
        return std::find(ids.begin(), ids.end(), id) != ids.end();
    }

    radio::Links Topology::links() const
    {
        if (explicit_edges)
        {
            std::vector<std::pair<std::int32_t, std::int32_t>> by_index;
            by_index.reserve(explicit_edges->size());
            for (const auto &[a, b] : *explicit_edges)
            {
                by_index.emplace_back(static_cast<std::int32_t>(index_of(a)), static_cast<std::int32_t>(index_of(b)));
            }
            return radio::Links::from_edges(size(), by_index);
        }
        return radio::Links::unit_disk(positions, ranges);
    }

    std::vector<Edge> Topology::edges() const
    {
        const radio::Links l = links();
        std::set<Edge> out;
        for (std::size_t a = 0; a < l.size(); ++a)
        {
            for (std::int32_t b : l.reaches[a])
            {
                const NodeId x = ids[a];
                const NodeId y = ids[static_cast<std::size_t>(b)];
                out.emplace(std::min(x, y), std::max(x, y));
            }
        }
        return {out.begin(), out.end()};
    }

    std::vector<NodeId> Topology::neighbors(NodeId id) const
    {
        const radio::Links l = links();
        std::vector<NodeId> out;
        for (std::int32_t b : l.reaches[index_of(id)])
        {
            out.push_back(ids[static_cast<std::size_t>(b)]);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    void Topology::validate() const
    {
        if (ids.empty())
        {
            throw std::invalid_argument("topology has no nodes");
        }
        if (positions.size() != ids.size() || ranges.size() != ids.size())
        {
            throw std::invalid_argument("topology: ids, positions and ranges differ in size");
        }
        std::vector<NodeId> sorted = ids;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        {
            throw std::invalid_argument("topology: duplicate node id");
        }
        if (explicit_edges)
        {
            for (const auto &[a, b] : *explicit_edges)
            {
                if (!contains(a) || !contains(b))
                {
                    throw std::invalid_argument("topology: edge " + std::to_string(a) + "-" + std::to_string(b) +
                                                " names an unknown node");
                }
                if (a == b)
                {
                    throw std::invalid_argument("topology: self-loop on node " + std::to_string(a));
                }
            }
        }
    }

    Topology make_clique(int n)
    {
        if (n < 2)
        {
            throw std::invalid_argument("clique needs n >= 2");
        }
        Topology t;
        t.name = "clique";
        std::vector<Edge> edges;
        for (int i = 0; i < n; ++i)
        {
            const double angle = 2.0 * std::numbers::pi * i / n;
            t.ids.push_back(i + 1);
            t.positions.push_back({std::cos(angle), std::sin(angle)});
            t.ranges.push_back(2.5);
            for (int j = i + 1; j < n; ++j)
            {
                edges.emplace_back(i + 1, j + 1);
            }
        }
        t.explicit_edges = std::move(edges);
        return t;
    }

    Topology make_bottleneck4()
    {
        Topology t;
        t.name = "bottleneck4";
        t.ids = {1, 2, 3, 4};
        t.positions = {{0.0, 0.0}, {0.0, 10.0}, {8.0, 5.0}, {16.0, 5.0}};
        t.ranges = {10.0, 10.0, 10.0, 10.0};
        t.explicit_edges = std::vector<Edge>{{1, 2}, {1, 3}, {2, 3}, {3, 4}};
        return t;
    }

    Topology make_grid(int rows, int cols, double spacing, int R)
    {
        if (rows < 1 || cols < 1 || rows * cols < 2)
        {
            throw std::invalid_argument("grid needs at least two nodes");
        }
        if (!(spacing > 0.0))
        {
            throw std::invalid_argument("grid spacing must be positive");
        }
        if (R < 1 || R > 5)
        {
            throw std::invalid_argument("grid R must lie in [1, 5]");
        }
        Topology t;
        t.name = "grid";
        const double radius = 2.0 + 10.0 * R;
        for (int r = 0; r < rows; ++r)
        {
            for (int c = 0; c < cols; ++c)
            {
                t.ids.push_back(r * cols + c + 1);
                t.positions.push_back({c * spacing, r * spacing});
                t.ranges.push_back(radius);
            }
        }
        return t;
    }

    Topology make_custom(std::vector<Edge> edges)
    {
        if (edges.empty())
        {
            throw std::invalid_argument("custom topology needs at least one edge");
        }
        std::set<NodeId> ids;
        for (const auto &[a, b] : edges)
        {
            ids.insert(a);
            ids.insert(b);
        }
        Topology t;
        t.name = "custom";
        t.ids.assign(ids.begin(), ids.end());
        t.positions.assign(t.ids.size(), radio::Position{});
        t.ranges.assign(t.ids.size(), 0.0);
        t.explicit_edges = std::move(edges);
        t.validate();
        return t;
    }

    int diameter(const Topology &topology)
    {
        const radio::Links l = topology.links();
        const std::size_t n = l.size();
        int best = 0;
        for (std::size_t s = 0; s < n; ++s)
        {
            std::vector<int> dist(n, -1);
            std::queue<std::size_t> q;
            dist[s] = 0;
            q.push(s);
            while (!q.empty())
            {
                const std::size_t u = q.front();
                q.pop();
                for (std::int32_t v : l.reaches[u])
                {
                    const auto vi = static_cast<std::size_t>(v);
                    if (dist[vi] < 0)
                    {
                        dist[vi] = dist[u] + 1;
                        q.push(vi);
                    }
                }
            }
            for (int d : dist)
            {
                if (d < 0)
                {
                    return -1;
                }
                best = std::max(best, d);
            }
        }
        return best;
    }
} // namespace tricklemac::scenario
