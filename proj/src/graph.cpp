#include "gossipmesh/graph.hpp"

#include <algorithm>
#include <queue>

namespace gossipmesh {

std::string default_label(int index) {
    std::string s;
    int i = index + 1;
    while (i > 0) {
        const int r = (i - 1) % 26;
        s.insert(s.begin(), static_cast<char>('A' + r));
        i = (i - 1) / 26;
    }
    return s;
}

static std::vector<std::string> make_default_labels(int n) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) labels.push_back(default_label(i));
    return labels;
}

// ---------------------------------------------------------------------------
// WeightedGraph

WeightedGraph::WeightedGraph(int n) : WeightedGraph(n, make_default_labels(n)) {}

WeightedGraph::WeightedGraph(int n, std::vector<std::string> labels)
    : n_(n), labels_(std::move(labels)), adj_(static_cast<std::size_t>(std::max(n, 0))) {
    if (n < 0) throw InvalidParamsError("node count must be non-negative");
    if (static_cast<int>(labels_.size()) != n)
        throw InvalidParamsError("label count must match node count");
}

void WeightedGraph::check_node(NodeId u) const {
    if (u < 0 || u >= n_) throw InvalidParamsError("node id out of range: " + std::to_string(u));
}

const std::string& WeightedGraph::label(NodeId u) const {
    check_node(u);
    return labels_[static_cast<std::size_t>(u)];
}

NodeId WeightedGraph::find_label(const std::string& label) const {
    for (int i = 0; i < n_; ++i)
        if (labels_[static_cast<std::size_t>(i)] == label) return i;
    return -1;
}

void WeightedGraph::add_edge(NodeId u, NodeId v, double cost_ms) {
    check_node(u);
    check_node(v);
    if (u == v) throw InvalidParamsError("self loops are not allowed");
    if (!(cost_ms > 0.0)) throw InvalidParamsError("edge cost must be strictly positive");
    const auto key = std::minmax(u, v);
    if (cost_.count({key.first, key.second}))
        throw InvalidParamsError("duplicate edge " + label(u) + "-" + label(v));
    cost_[{key.first, key.second}] = cost_ms;
    auto& au = adj_[static_cast<std::size_t>(u)];
    au.insert(std::lower_bound(au.begin(), au.end(), v), v);
    auto& av = adj_[static_cast<std::size_t>(v)];
    av.insert(std::lower_bound(av.begin(), av.end(), u), u);
}

bool WeightedGraph::has_edge(NodeId u, NodeId v) const { return cost(u, v).has_value(); }

std::optional<double> WeightedGraph::cost(NodeId u, NodeId v) const {
    check_node(u);
    check_node(v);
    const auto key = std::minmax(u, v);
    const auto it = cost_.find({key.first, key.second});
    if (it == cost_.end()) return std::nullopt;
    return it->second;
}

std::vector<Edge> WeightedGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(cost_.size());
    for (const auto& [key, c] : cost_) out.push_back({key.first, key.second, c});
    return out;
}

const std::vector<NodeId>& WeightedGraph::neighbors(NodeId u) const {
    check_node(u);
    return adj_[static_cast<std::size_t>(u)];
}

int WeightedGraph::degree(NodeId u) const {
    return static_cast<int>(neighbors(u).size());
}

double WeightedGraph::total_weight() const {
    double sum = 0.0;
    for (const auto& [key, c] : cost_) sum += c;
    return sum;
}

nlohmann::json WeightedGraph::to_json() const {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [key, c] : cost_) edges.push_back({key.first, key.second, c});
    return {{"n", n_}, {"labels", labels_}, {"edges", edges}};
}

WeightedGraph WeightedGraph::from_json(const nlohmann::json& j) {
    const int n = j.at("n").get<int>();
    std::vector<std::string> labels;
    if (j.contains("labels") && !j.at("labels").empty())
        labels = j.at("labels").get<std::vector<std::string>>();
    else
        labels = make_default_labels(n);
    WeightedGraph g(n, std::move(labels));
    for (const auto& e : j.at("edges"))
        g.add_edge(e.at(0).get<NodeId>(), e.at(1).get<NodeId>(), e.at(2).get<double>());
    return g;
}

// ---------------------------------------------------------------------------
// AdjacencyMatrix

AdjacencyMatrix::AdjacencyMatrix(int n)
    : n_(n), cells_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    if (n < 0) throw InvalidParamsError("node count must be non-negative");
    for (int i = 0; i < n; ++i) cells_[static_cast<std::size_t>(i) * n + i] = 0.0;
}

void AdjacencyMatrix::check_node(NodeId u) const {
    if (u < 0 || u >= n_) throw InvalidParamsError("node id out of range: " + std::to_string(u));
}

std::optional<double> AdjacencyMatrix::at(NodeId u, NodeId v) const {
    check_node(u);
    check_node(v);
    return cells_[static_cast<std::size_t>(u) * n_ + v];
}

void AdjacencyMatrix::set(NodeId u, NodeId v, double cost_ms) {
    check_node(u);
    check_node(v);
    if (u == v) throw InvalidParamsError("diagonal entries are fixed at zero");
    if (!(cost_ms > 0.0)) throw InvalidParamsError("matrix cost must be strictly positive");
    cells_[static_cast<std::size_t>(u) * n_ + v] = cost_ms;
    cells_[static_cast<std::size_t>(v) * n_ + u] = cost_ms;
}

bool AdjacencyMatrix::connected() const {
    if (n_ <= 1) return true;
    UnionFind uf(n_);
    for (int u = 0; u < n_; ++u)
        for (int v = u + 1; v < n_; ++v)
            if (cells_[static_cast<std::size_t>(u) * n_ + v].has_value()) uf.unite(u, v);
    return uf.components() == 1;
}

WeightedGraph AdjacencyMatrix::to_graph(std::vector<std::string> labels) const {
    WeightedGraph g = labels.empty() ? WeightedGraph(n_) : WeightedGraph(n_, std::move(labels));
    for (int u = 0; u < n_; ++u)
        for (int v = u + 1; v < n_; ++v) {
            const auto& c = cells_[static_cast<std::size_t>(u) * n_ + v];
            if (c.has_value()) g.add_edge(u, v, *c);
        }
    return g;
}

AdjacencyMatrix build_adjacency(const WeightedGraph& graph) {
    AdjacencyMatrix m(graph.node_count());
    for (const Edge& e : graph.edges()) m.set(e.u, e.v, e.cost_ms);
    return m;
}

// ---------------------------------------------------------------------------
// SpanningTree

SpanningTree::SpanningTree(int n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)), adj_(static_cast<std::size_t>(std::max(n, 0))) {
    if (n < 1) throw InvalidParamsError("a tree needs at least one node");
    if (static_cast<int>(edges_.size()) != n - 1)
        throw InvalidParamsError("a spanning tree over n nodes has exactly n-1 edges");
    for (Edge& e : edges_) {
        if (e.u > e.v) std::swap(e.u, e.v);
        if (e.u < 0 || e.v >= n_ || e.u == e.v)
            throw InvalidParamsError("tree edge endpoints out of range");
        if (!(e.cost_ms > 0.0)) throw InvalidParamsError("tree edge cost must be positive");
    }
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); });
    UnionFind uf(n_);
    for (const Edge& e : edges_) {
        if (!uf.unite(e.u, e.v)) throw InvalidParamsError("tree edges contain a cycle");
        adj_[static_cast<std::size_t>(e.u)].push_back(e.v);
        adj_[static_cast<std::size_t>(e.v)].push_back(e.u);
    }
    if (uf.components() != 1) throw InvalidParamsError("tree edges do not connect all nodes");
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

SpanningTree SpanningTree::from_pairs(const WeightedGraph& parent,
                                      const std::vector<std::pair<NodeId, NodeId>>& pairs) {
    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (const auto& [u, v] : pairs) {
        const auto c = parent.cost(u, v);
        if (!c) throw InvalidParamsError("tree edge missing from parent graph");
        edges.push_back({std::min(u, v), std::max(u, v), *c});
    }
    return SpanningTree(parent.node_count(), std::move(edges));
}

const std::vector<NodeId>& SpanningTree::neighbors(NodeId u) const {
    if (u < 0 || u >= n_) throw InvalidParamsError("node id out of range: " + std::to_string(u));
    return adj_[static_cast<std::size_t>(u)];
}

int SpanningTree::degree(NodeId u) const { return static_cast<int>(neighbors(u).size()); }

double SpanningTree::total_weight() const {
    double sum = 0.0;
    for (const Edge& e : edges_) sum += e.cost_ms;
    return sum;
}

// ---------------------------------------------------------------------------
// TwoColoring

Color TwoColoring::at(NodeId u) const {
    if (u < 0 || u >= node_count())
        throw InvalidParamsError("node id out of range: " + std::to_string(u));
    return by_node_[static_cast<std::size_t>(u)];
}

std::vector<NodeId> TwoColoring::nodes_of(Color c) const {
    std::vector<NodeId> out;
    for (int i = 0; i < node_count(); ++i)
        if (by_node_[static_cast<std::size_t>(i)] == c) out.push_back(i);
    return out;
}

bool TwoColoring::proper_on(const SpanningTree& tree) const {
    if (tree.node_count() != node_count()) return false;
    for (const Edge& e : tree.edges())
        if (at(e.u) == at(e.v)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// UnionFind

UnionFind::UnionFind(int n) : parent_(static_cast<std::size_t>(std::max(n, 0))), components_(n) {
    for (int i = 0; i < n; ++i) parent_[static_cast<std::size_t>(i)] = i;
}

int UnionFind::find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
        parent_[static_cast<std::size_t>(x)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
        x = parent_[static_cast<std::size_t>(x)];
    }
    return x;
}

bool UnionFind::unite(int x, int y) {
    const int rx = find(x), ry = find(y);
    if (rx == ry) return false;
    parent_[static_cast<std::size_t>(std::max(rx, ry))] = std::min(rx, ry);
    --components_;
    return true;
}

// ---------------------------------------------------------------------------
// Algorithms

SpanningTree prim_mst(const WeightedGraph& graph, NodeId root) {
    const int n = graph.node_count();
    if (n < 1) throw InvalidParamsError("prim_mst needs a non-empty graph");
    if (root < 0 || root >= n) throw InvalidParamsError("root out of range");
    const std::vector<Edge> all = graph.edges();
    std::vector<bool> in_tree(static_cast<std::size_t>(n), false);
    in_tree[static_cast<std::size_t>(root)] = true;
    std::vector<Edge> picked;
    picked.reserve(static_cast<std::size_t>(n - 1));
    for (int step = 1; step < n; ++step) {
        bool found = false;
        Edge best{};
        for (const Edge& e : all) {
            if (in_tree[static_cast<std::size_t>(e.u)] == in_tree[static_cast<std::size_t>(e.v)])
                continue;
            if (!found || e.cost_ms < best.cost_ms ||
                (e.cost_ms == best.cost_ms && std::pair(e.u, e.v) < std::pair(best.u, best.v))) {
                best = e;
                found = true;
            }
        }
        if (!found) throw DisconnectedGraphError("graph is not connected");
        picked.push_back(best);
        in_tree[static_cast<std::size_t>(best.u)] = true;
        in_tree[static_cast<std::size_t>(best.v)] = true;
    }
    return SpanningTree(n, std::move(picked));
}

TwoColoring bfs_two_coloring(const SpanningTree& tree, NodeId root) {
    const int n = tree.node_count();
    if (root < 0 || root >= n) throw InvalidParamsError("root out of range");
    std::vector<Color> color(static_cast<std::size_t>(n), Color::Red);
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::queue<NodeId> q;
    q.push(root);
    seen[static_cast<std::size_t>(root)] = true;
    while (!q.empty()) {
        const NodeId u = q.front();
        q.pop();
        for (const NodeId v : tree.neighbors(u)) {
            if (seen[static_cast<std::size_t>(v)]) continue;
            seen[static_cast<std::size_t>(v)] = true;
            color[static_cast<std::size_t>(v)] = opposite(color[static_cast<std::size_t>(u)]);
            q.push(v);
        }
    }
    return TwoColoring(std::move(color));
}

SlotLength slot_length(double ping_max_ms, double model_size_mb, double ping_size_bytes) {
    if (!(ping_max_ms > 0.0)) throw NonPositiveInputError("ping_max must be > 0");
    if (!(model_size_mb > 0.0)) throw NonPositiveInputError("model_size must be > 0");
    if (!(ping_size_bytes > 0.0)) throw NonPositiveInputError("ping_size must be > 0");
    return {ping_max_ms * model_size_mb * 1000.0 / ping_size_bytes, ping_max_ms, model_size_mb,
            ping_size_bytes};
}

double max_ping_per_color(const AdjacencyMatrix& matrix, const SpanningTree& tree,
                          const TwoColoring& coloring) {
    const int n = tree.node_count();
    if (matrix.node_count() != n || coloring.node_count() != n)
        throw InvalidParamsError("matrix, tree and coloring must cover the same nodes");
    double per_color[2] = {0.0, 0.0};
    for (NodeId u = 0; u < n; ++u) {
        double node_max = 0.0;
        for (const NodeId v : tree.neighbors(u)) {
            const auto c = matrix.at(u, v);
            if (!c) throw InvalidParamsError("tree edge missing from matrix");
            node_max = std::max(node_max, *c);
        }
        const int idx = coloring.at(u) == Color::Red ? 0 : 1;
        per_color[idx] = std::max(per_color[idx], node_max);
    }
    return std::max(per_color[0], per_color[1]);
}

bool is_connected(const WeightedGraph& graph) {
    const int n = graph.node_count();
    if (n <= 1) return true;
    UnionFind uf(n);
    for (const Edge& e : graph.edges()) uf.unite(e.u, e.v);
    return uf.components() == 1;
}

}  // namespace gossipmesh
