#include "gossipmesh/topology.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "gossipmesh/rng.hpp"

namespace gossipmesh::topo {

TopologyKind TopologyKind::complete() { return {Family::Complete}; }

TopologyKind TopologyKind::erdos_renyi(double p) {
    TopologyKind k;
    k.family = Family::ErdosRenyi;
    k.p = p;
    return k;
}

TopologyKind TopologyKind::watts_strogatz(int k, double beta) {
    TopologyKind t;
    t.family = Family::WattsStrogatz;
    t.k = k;
    t.beta = beta;
    return t;
}

TopologyKind TopologyKind::barabasi_albert(int m) {
    TopologyKind t;
    t.family = Family::BarabasiAlbert;
    t.m = m;
    return t;
}

static std::map<std::string, std::string> parse_params(const std::string& s) {
    std::map<std::string, std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw InvalidParamsError("bad topology parameter: " + item);
        out[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return out;
}

TopologyKind TopologyKind::parse(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (name == "complete" || name == "k") {
        if (!rest.empty()) throw InvalidParamsError("complete takes no parameters");
        return complete();
    }
    const auto params = parse_params(rest);
    auto get = [&](const char* key, double fallback) {
        const auto it = params.find(key);
        return it == params.end() ? fallback : std::stod(it->second);
    };
    if (name == "er") return erdos_renyi(get("p", 0.3));
    if (name == "ws")
        return watts_strogatz(static_cast<int>(get("k", 4)), get("beta", 0.2));
    if (name == "ba") return barabasi_albert(static_cast<int>(get("m", 2)));
    throw InvalidParamsError("unknown topology spec: " + spec);
}

std::string TopologyKind::to_string() const {
    std::ostringstream os;
    switch (family) {
        case Family::Complete: return "complete";
        case Family::ErdosRenyi: os << "er:p=" << p; break;
        case Family::WattsStrogatz: os << "ws:k=" << k << ",beta=" << beta; break;
        case Family::BarabasiAlbert: os << "ba:m=" << m; break;
    }
    return os.str();
}

std::string TopologyKind::family_name() const {
    switch (family) {
        case Family::Complete: return "Complete";
        case Family::ErdosRenyi: return "ErdosRenyi";
        case Family::WattsStrogatz: return "WattsStrogatz";
        case Family::BarabasiAlbert: return "BarabasiAlbert";
    }
    return "?";
}

void TopologyKind::validate(int n) const {
    switch (family) {
        case Family::Complete:
            break;
        case Family::ErdosRenyi:
            if (p < 0.0 || p > 1.0) throw InvalidParamsError("er: p must be in [0, 1]");
            break;
        case Family::WattsStrogatz:
            if (k < 2 || k % 2 != 0) throw InvalidParamsError("ws: k must be even and >= 2");
            if (k >= n) throw InvalidParamsError("ws: k must be < n");
            if (beta < 0.0 || beta > 1.0) throw InvalidParamsError("ws: beta must be in [0, 1]");
            break;
        case Family::BarabasiAlbert:
            if (m < 1) throw InvalidParamsError("ba: m must be >= 1");
            if (m >= n) throw InvalidParamsError("ba: m must be < n");
            break;
    }
}

SubnetAssignment SubnetAssignment::even_blocks(int n, int subnets) {
    if (n < 1 || subnets < 1) throw InvalidParamsError("even_blocks needs n >= 1, subnets >= 1");
    SubnetAssignment s;
    s.subnet_of.resize(static_cast<std::size_t>(n));
    const int base = n / subnets;
    const int extra = n % subnets;  // first `extra` blocks get one more node
    int node = 0;
    for (int b = 0; b < subnets; ++b) {
        const int size = base + (b < extra ? 1 : 0);
        for (int i = 0; i < size && node < n; ++i, ++node)
            s.subnet_of[static_cast<std::size_t>(node)] = b;
    }
    return s;
}

int SubnetAssignment::subnet_count() const {
    int hi = -1;
    for (const int s : subnet_of) hi = std::max(hi, s);
    return hi + 1;
}

void SubnetAssignment::validate(int n) const {
    if (static_cast<int>(subnet_of.size()) != n)
        throw InvalidParamsError("subnet assignment does not cover all nodes");
    for (const int s : subnet_of)
        if (s < 0) throw InvalidParamsError("subnet index must be non-negative");
    if (!(intra_lo > 0.0) || intra_hi < intra_lo)
        throw InvalidParamsError("intra cost range must be positive and ordered");
    if (mult_lo < 10.0 || mult_hi > 60.0 || mult_hi < mult_lo)
        throw InvalidParamsError("inter multiplier range must lie within [10, 60]");
}

static WeightedGraph generate_raw(const TopologyKind& kind, int n, Rng& rng) {
    WeightedGraph g(n);
    switch (kind.family) {
        case Family::Complete:
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v) g.add_edge(u, v, 1.0);
            break;
        case Family::ErdosRenyi:
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v)
                    if (rng.bernoulli(kind.p)) g.add_edge(u, v, 1.0);
            break;
        case Family::WattsStrogatz: {
            std::set<std::pair<int, int>> edges;
            for (int i = 0; i < n; ++i)
                for (int j = 1; j <= kind.k / 2; ++j) {
                    const int v = (i + j) % n;
                    edges.insert({std::min(i, v), std::max(i, v)});
                }
            if (kind.beta > 0.0) {
                for (int i = 0; i < n; ++i)
                    for (int j = 1; j <= kind.k / 2; ++j) {
                        const int v = (i + j) % n;
                        const std::pair<int, int> cur{std::min(i, v), std::max(i, v)};
                        if (!edges.count(cur) || !rng.bernoulli(kind.beta)) continue;
                        for (int attempt = 0; attempt < 4 * n; ++attempt) {
                            const int w = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
                            const std::pair<int, int> cand{std::min(i, w), std::max(i, w)};
                            if (w == i || edges.count(cand)) continue;
                            edges.erase(cur);
                            edges.insert(cand);
                            break;
                        }
                    }
            }
            for (const auto& [u, v] : edges) g.add_edge(u, v, 1.0);
            break;
        }
        case Family::BarabasiAlbert: {
            const int m = kind.m;
            std::vector<int> deg(static_cast<std::size_t>(n), 0);
            for (int u = 0; u < m; ++u)
                for (int v = u + 1; v < m; ++v) {
                    g.add_edge(u, v, 1.0);
                    ++deg[static_cast<std::size_t>(u)];
                    ++deg[static_cast<std::size_t>(v)];
                }
            for (int nn = m; nn < n; ++nn) {
                std::set<int> targets;
                int attempts = 0;
                while (static_cast<int>(targets.size()) < std::min(m, nn)) {
                    if (++attempts > 64 * m) {
                        // fill up deterministically with the lowest untaken ids
                        for (int c = 0; c < nn && static_cast<int>(targets.size()) < m; ++c)
                            targets.insert(c);
                        break;
                    }
                    long long total = 0;
                    for (int c = 0; c < nn; ++c) total += deg[static_cast<std::size_t>(c)];
                    int chosen;
                    if (total == 0) {
                        chosen = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(nn)));
                    } else {
                        long long r = static_cast<long long>(
                            rng.next_below(static_cast<std::uint64_t>(total)));
                        chosen = nn - 1;
                        for (int c = 0; c < nn; ++c) {
                            r -= deg[static_cast<std::size_t>(c)];
                            if (r < 0) {
                                chosen = c;
                                break;
                            }
                        }
                    }
                    targets.insert(chosen);
                }
                for (const int t : targets) {
                    g.add_edge(t, nn, 1.0);
                    ++deg[static_cast<std::size_t>(t)];
                    ++deg[static_cast<std::size_t>(nn)];
                }
            }
            break;
        }
    }
    return g;
}

WeightedGraph generate(const TopologyKind& kind, int n, std::uint64_t seed) {
    if (n < 2) throw InvalidParamsError("topology generation needs n >= 2");
    kind.validate(n);
    Rng rng(splitmix64(seed ^ 0x746f706fULL));
    const WeightedGraph g = generate_raw(kind, n, rng);
    return ensure_connected(g, splitmix64(seed ^ 0x636f6e6eULL));
}

WeightedGraph assign_costs(const WeightedGraph& graph, const SubnetAssignment& subnets,
                           std::uint64_t seed) {
    const int n = graph.node_count();
    subnets.validate(n);
    Rng rng(splitmix64(seed ^ 0x636f7374ULL));
    WeightedGraph out(n, graph.labels());
    for (const Edge& e : graph.edges()) {
        const double base = rng.uniform(subnets.intra_lo, subnets.intra_hi);
        const bool intra = subnets.subnet_of[static_cast<std::size_t>(e.u)] ==
                           subnets.subnet_of[static_cast<std::size_t>(e.v)];
        const double cost =
            intra ? base : base * rng.uniform(subnets.mult_lo, subnets.mult_hi);
        out.add_edge(e.u, e.v, cost);
    }
    return out;
}

WeightedGraph ensure_connected(const WeightedGraph& graph, std::uint64_t seed) {
    const int n = graph.node_count();
    UnionFind uf(n);
    for (const Edge& e : graph.edges()) uf.unite(e.u, e.v);
    if (uf.components() <= 1) return graph;

    // components keyed (and therefore ordered) by their smallest member
    std::map<int, std::vector<NodeId>> comps;
    for (int u = 0; u < n; ++u) comps[uf.find(u)].push_back(u);

    Rng rng(splitmix64(seed ^ 0x62726964ULL));
    WeightedGraph out = graph;
    std::vector<NodeId> merged;
    bool first = true;
    for (const auto& [root, members] : comps) {
        if (first) {
            merged = members;
            first = false;
            continue;
        }
        const NodeId a = merged[rng.next_below(merged.size())];
        const NodeId b = members[rng.next_below(members.size())];
        out.add_edge(a, b, 1.0);
        merged.insert(merged.end(), members.begin(), members.end());
    }
    return out;
}

}  // namespace gossipmesh::topo
