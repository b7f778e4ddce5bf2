#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gossipmesh/graph.hpp"

namespace gossipmesh::topo {

enum class Family { Complete, ErdosRenyi, WattsStrogatz, BarabasiAlbert };

/// Which random-graph family to generate, with its parameters. Parsed from
/// compact CLI specs: "complete", "er:p=0.3", "ws:k=4,beta=0.2", "ba:m=2".
struct TopologyKind {
    Family family = Family::Complete;
    double p = 0.3;     // Erdos-Renyi edge probability
    int k = 4;          // Watts-Strogatz neighbors per node (even)
    double beta = 0.2;  // Watts-Strogatz rewiring probability
    int m = 2;          // Barabasi-Albert edges per new node

    static TopologyKind complete();
    static TopologyKind erdos_renyi(double p);
    static TopologyKind watts_strogatz(int k, double beta);
    static TopologyKind barabasi_albert(int m);
    static TopologyKind parse(const std::string& spec);

    std::string to_string() const;
    /// Human-readable family name ("ErdosRenyi", ...).
    std::string family_name() const;
    void validate(int n) const;
};

/// Node -> subnet map plus the cost model: intra-subnet edges draw their
/// ping from intra range, inter-subnet edges multiply such a draw by a
/// factor from the multiplier range (constrained to [10, 60]).
struct SubnetAssignment {
    std::vector<int> subnet_of;
    double intra_lo = 0.2;
    double intra_hi = 1.0;
    double mult_lo = 10.0;
    double mult_hi = 60.0;

    /// Contiguous, as-even-as-possible blocks (4/3/3 for n=10, subnets=3).
    static SubnetAssignment even_blocks(int n, int subnets = 3);
    int subnet_count() const;
    void validate(int n) const;
};

/// Generate a simple undirected graph of the requested family with unit edge
/// costs. Deterministic per seed, and always connected: families that can
/// come out split are repaired via ensure_connected.
WeightedGraph generate(const TopologyKind& kind, int n, std::uint64_t seed);

/// Redraw every edge cost according to the subnet model. Deterministic per
/// seed; never produces a cost <= 0.
WeightedGraph assign_costs(const WeightedGraph& graph, const SubnetAssignment& subnets,
                           std::uint64_t seed);

/// Returns the input unchanged when connected; otherwise adds one bridging
/// edge per extra component (unit cost), endpoints picked deterministically
/// from the seed.
WeightedGraph ensure_connected(const WeightedGraph& graph, std::uint64_t seed);

}  // namespace gossipmesh::topo
