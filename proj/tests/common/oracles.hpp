#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is deliberately brute force and kept free of the code
// paths it validates.

#include <algorithm>
#include <limits>
#include <vector>

#include "gossipmesh/graph.hpp"
#include "gossipmesh/rng.hpp"

namespace oracles {

// Minimum spanning tree weight by exhaustive enumeration of all (n-1)-edge
// subsets. Only sensible for small n.
inline double brute_force_mst_weight(const gossipmesh::WeightedGraph& g) {
    const int n = g.node_count();
    if (n <= 1) return 0.0;
    const auto edges = g.edges();
    const int m = static_cast<int>(edges.size());
    const int k = n - 1;
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> pick(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
    if (m < k) return best;
    while (true) {
        gossipmesh::UnionFind uf(n);
        double w = 0.0;
        bool tree = true;
        for (const int idx : pick) {
            const auto& e = edges[static_cast<std::size_t>(idx)];
            if (!uf.unite(e.u, e.v)) {
                tree = false;
                break;
            }
            w += e.cost_ms;
        }
        if (tree && uf.components() == 1) best = std::min(best, w);
        // next combination
        int i = k - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == m - k + i) --i;
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
    return best;
}

// Random connected graph with positive weights, for MST cross-checks.
inline gossipmesh::WeightedGraph random_connected_graph(gossipmesh::Rng& rng, int max_n = 8) {
    const int n = 2 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_n - 1)));
    gossipmesh::WeightedGraph g(n);
    // random spanning tree first, then extra edges
    for (int v = 1; v < n; ++v) {
        const int u = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(v)));
        g.add_edge(u, v, rng.uniform(0.1, 10.0));
    }
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (!g.has_edge(u, v) && rng.bernoulli(0.4)) g.add_edge(u, v, rng.uniform(0.1, 10.0));
    return g;
}

// Uniform random labelled tree via Pruefer sequence decoding.
inline gossipmesh::SpanningTree random_tree(gossipmesh::Rng& rng, int n) {
    using gossipmesh::Edge;
    if (n == 1) return gossipmesh::SpanningTree(1, {});
    if (n == 2) return gossipmesh::SpanningTree(2, {Edge{0, 1, 1.0}});
    std::vector<int> pruefer(static_cast<std::size_t>(n - 2));
    for (auto& x : pruefer) x = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    std::vector<int> deg(static_cast<std::size_t>(n), 1);
    for (const int x : pruefer) ++deg[static_cast<std::size_t>(x)];
    std::vector<Edge> edges;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (const int x : pruefer) {
        for (int leaf = 0; leaf < n; ++leaf) {
            if (deg[static_cast<std::size_t>(leaf)] == 1 && !used[static_cast<std::size_t>(leaf)]) {
                edges.push_back({std::min(leaf, x), std::max(leaf, x), 1.0});
                used[static_cast<std::size_t>(leaf)] = true;
                --deg[static_cast<std::size_t>(x)];
                break;
            }
        }
    }
    int a = -1, b = -1;
    for (int i = 0; i < n; ++i) {
        if (deg[static_cast<std::size_t>(i)] == 1 && !used[static_cast<std::size_t>(i)]) {
            if (a < 0)
                a = i;
            else
                b = i;
        }
    }
    edges.push_back({std::min(a, b), std::max(a, b), 1.0});
    return gossipmesh::SpanningTree(n, std::move(edges));
}

// Flow-centric water filling: every unfrozen flow rises at the same rate
// until some resource saturates, whose flows then freeze. Reference for the
// resource-centric allocator in the simulator.
inline std::vector<double> water_filling(const std::vector<std::vector<int>>& flow_paths,
                                         const std::vector<double>& capacities) {
    const std::size_t nf = flow_paths.size();
    const std::size_t nr = capacities.size();
    std::vector<double> rate(nf, 0.0);
    std::vector<bool> frozen(nf, false);
    std::vector<double> remaining = capacities;
    std::size_t left = nf;
    while (left > 0) {
        std::vector<int> count(nr, 0);
        for (std::size_t f = 0; f < nf; ++f)
            if (!frozen[f])
                for (const int r : flow_paths[f]) ++count[static_cast<std::size_t>(r)];
        double delta = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < nr; ++r)
            if (count[r] > 0) delta = std::min(delta, remaining[r] / count[r]);
        if (!std::isfinite(delta)) {
            for (std::size_t f = 0; f < nf; ++f)
                if (!frozen[f]) rate[f] = std::numeric_limits<double>::infinity();
            break;
        }
        for (std::size_t f = 0; f < nf; ++f)
            if (!frozen[f]) rate[f] += delta;
        for (std::size_t r = 0; r < nr; ++r) remaining[r] -= delta * count[r];
        // freeze flows on saturated resources
        bool froze = false;
        for (std::size_t f = 0; f < nf; ++f) {
            if (frozen[f]) continue;
            for (const int r : flow_paths[f]) {
                if (remaining[static_cast<std::size_t>(r)] <= 1e-12) {
                    frozen[f] = true;
                    froze = true;
                    --left;
                    break;
                }
            }
        }
        if (!froze) break;  // all remaining flows are unconstrained
    }
    return rate;
}

}  // namespace oracles
