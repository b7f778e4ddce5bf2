#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gossipmesh/errors.hpp"

namespace gossipmesh {

using NodeId = int;

enum class Color { Red, Blue };

inline Color opposite(Color c) { return c == Color::Red ? Color::Blue : Color::Red; }
inline const char* color_name(Color c) { return c == Color::Red ? "red" : "blue"; }

/// Undirected edge with a communication cost in milliseconds. Canonical form
/// has u < v.
struct Edge {
    NodeId u = 0;
    NodeId v = 0;
    double cost_ms = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Spreadsheet-style label for a node index: A..Z, AA, AB, ...
std::string default_label(int index);

/// Simple undirected graph over nodes 0..n-1 with strictly positive edge
/// costs (ping latency, ms). At most one edge per pair, no self loops.
class WeightedGraph {
public:
    WeightedGraph() = default;
    explicit WeightedGraph(int n);
    WeightedGraph(int n, std::vector<std::string> labels);

    int node_count() const { return n_; }
    int edge_count() const { return static_cast<int>(cost_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(NodeId u) const;
    /// Index of the node carrying `label`, or -1.
    NodeId find_label(const std::string& label) const;

    void add_edge(NodeId u, NodeId v, double cost_ms);
    bool has_edge(NodeId u, NodeId v) const;
    std::optional<double> cost(NodeId u, NodeId v) const;
    /// Edges in canonical (u, v) order.
    std::vector<Edge> edges() const;
    /// Neighbor ids in ascending order.
    const std::vector<NodeId>& neighbors(NodeId u) const;
    int degree(NodeId u) const;
    double total_weight() const;

    nlohmann::json to_json() const;
    static WeightedGraph from_json(const nlohmann::json& j);

    friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;

private:
    void check_node(NodeId u) const;

    int n_ = 0;
    std::vector<std::string> labels_;
    std::map<std::pair<NodeId, NodeId>, double> cost_;  // key has u < v
    std::vector<std::vector<NodeId>> adj_;              // ascending per node
};

/// Symmetric n x n cost matrix. The diagonal is zero; an absent link is a
/// distinct no-link state (never zero, never a sentinel cost).
class AdjacencyMatrix {
public:
    AdjacencyMatrix() = default;
    explicit AdjacencyMatrix(int n);

    int node_count() const { return n_; }
    /// Cost of (u, v); 0 on the diagonal; nullopt when there is no link.
    std::optional<double> at(NodeId u, NodeId v) const;
    bool has_link(NodeId u, NodeId v) const { return u != v && at(u, v).has_value(); }
    /// Symmetric assignment; requires u != v and cost > 0.
    void set(NodeId u, NodeId v, double cost_ms);

    bool connected() const;
    WeightedGraph to_graph(std::vector<std::string> labels = {}) const;

    friend bool operator==(const AdjacencyMatrix&, const AdjacencyMatrix&) = default;

private:
    void check_node(NodeId u) const;

    int n_ = 0;
    std::vector<std::optional<double>> cells_;
};

/// Tree over nodes 0..n-1: exactly n-1 edges, connected, acyclic.
/// Validated on construction.
class SpanningTree {
public:
    SpanningTree(int n, std::vector<Edge> edges);
    /// Build from (u, v) pairs, looking costs up in the parent graph.
    static SpanningTree from_pairs(const WeightedGraph& parent,
                                   const std::vector<std::pair<NodeId, NodeId>>& pairs);

    int node_count() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<NodeId>& neighbors(NodeId u) const;
    int degree(NodeId u) const;
    double total_weight() const;

    friend bool operator==(const SpanningTree&, const SpanningTree&) = default;

private:
    int n_ = 0;
    std::vector<Edge> edges_;               // canonical order
    std::vector<std::vector<NodeId>> adj_;  // ascending per node
};

/// Node -> {Red, Blue} assignment.
class TwoColoring {
public:
    TwoColoring() = default;
    explicit TwoColoring(std::vector<Color> by_node) : by_node_(std::move(by_node)) {}

    int node_count() const { return static_cast<int>(by_node_.size()); }
    Color at(NodeId u) const;
    std::vector<NodeId> nodes_of(Color c) const;
    /// True when every tree edge joins differently colored endpoints.
    bool proper_on(const SpanningTree& tree) const;

    friend bool operator==(const TwoColoring&, const TwoColoring&) = default;

private:
    std::vector<Color> by_node_;
};

/// Length of one color slot plus the inputs it was derived from.
struct SlotLength {
    double seconds = 0.0;
    double ping_max_ms = 0.0;
    double model_size_mb = 0.0;
    double ping_size_bytes = 0.0;

    friend bool operator==(const SlotLength&, const SlotLength&) = default;
};

/// Small union-find, used for connectivity and tree validation.
class UnionFind {
public:
    explicit UnionFind(int n);
    int find(int x);
    /// Joins two sets; false when x and y were already joined.
    bool unite(int x, int y);
    int components() const { return components_; }

private:
    std::vector<int> parent_;
    int components_ = 0;
};

AdjacencyMatrix build_adjacency(const WeightedGraph& graph);

/// Minimum spanning tree grown from `root`. Among equal-cost frontier edges
/// the canonically smallest (u, v) pair wins, so the result is deterministic.
/// Throws DisconnectedGraphError when no spanning tree exists.
SpanningTree prim_mst(const WeightedGraph& graph, NodeId root = 0);

/// Colors the tree by breadth-first traversal from `root` (Red), children
/// getting the opposite color of their parent. Neighbors are visited in
/// ascending id order.
TwoColoring bfs_two_coloring(const SpanningTree& tree, NodeId root = 0);

/// seconds = ping_max * model_size * 1000 / ping_size. All inputs must be
/// strictly positive.
SlotLength slot_length(double ping_max_ms, double model_size_mb, double ping_size_bytes);

/// Highest ping among each node's tree neighbors, maximized within each color
/// class and then overall. Equals the largest tree edge cost.
double max_ping_per_color(const AdjacencyMatrix& matrix, const SpanningTree& tree,
                          const TwoColoring& coloring);

bool is_connected(const WeightedGraph& graph);

}  // namespace gossipmesh
