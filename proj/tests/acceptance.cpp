// Acceptance suite: one line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "common/oracles.hpp"
#include "common/reference_trace.hpp"
#include "gossipmesh/experiment.hpp"

using namespace gossipmesh;

namespace {

struct Criterion {
    std::string name;
    std::function<std::string()> run;  // empty string on success, else failure detail
};

std::string check(bool ok, const std::string& detail) { return ok ? "" : detail; }

// 1. Reference trace replay: 23 slots, 90 transmissions, anchor rows exact.
std::string reference_trace_replay() {
    const gossip::ReferenceFixture fx = gossip::make_reference_fixture();
    const gossip::GossipTrace trace = gossip::run_round(fx.schedule, fx.models);
    if (trace.slot_count() != 23)
        return "expected 23 slots, got " + std::to_string(trace.slot_count());
    if (trace.total_transmissions() != 90)
        return "expected 90 transmissions, got " + std::to_string(trace.total_transmissions());
    const auto red = fx.schedule.coloring.nodes_of(Color::Red);
    for (const char c : {'C', 'E', 'G', 'H', 'I'}) {
        const NodeId id = fx.graph.find_label(std::string(1, c));
        if (std::find(red.begin(), red.end(), id) == red.end())
            return std::string("node ") + c + " should be red";
    }
    for (const auto& row : reference_trace::anchor_rows()) {
        const auto& record = trace.slots[static_cast<std::size_t>(row.slot - 1)];
        for (std::size_t i = 0; i < row.cells.size(); ++i) {
            const NodeId id = static_cast<NodeId>(i);
            const auto& snap = record.nodes.at(id);
            if (snap.store_owners != reference_trace::decode(fx.graph, row.cells[i].store) ||
                snap.queue_owners != reference_trace::decode(fx.graph, row.cells[i].queue))
                return "slot " + std::to_string(row.slot) + " mismatch at node " +
                       fx.graph.label(id);
        }
    }
    return "";
}

// 2. Prim equals the exhaustive spanning-tree minimum on 200 random graphs.
std::string mst_oracle_equivalence() {
    Rng rng(202);
    for (int iter = 0; iter < 200; ++iter) {
        const WeightedGraph g = oracles::random_connected_graph(rng, 8);
        const double got = prim_mst(g, 0).total_weight();
        const double want = oracles::brute_force_mst_weight(g);
        if (std::abs(got - want) > 1e-9 * std::max(1.0, want))
            return "weight " + std::to_string(got) + " vs oracle " + std::to_string(want) +
                   " at iteration " + std::to_string(iter);
    }
    return "";
}

// 3. Proper two-coloring with exactly two colors on 500 random trees.
std::string coloring_properties() {
    Rng rng(303);
    for (int iter = 0; iter < 500; ++iter) {
        const int n = 2 + static_cast<int>(rng.next_below(63));
        const SpanningTree tree = oracles::random_tree(rng, n);
        const NodeId root = static_cast<NodeId>(rng.next_below(static_cast<std::uint64_t>(n)));
        const TwoColoring coloring = bfs_two_coloring(tree, root);
        if (!coloring.proper_on(tree)) return "improper coloring at iteration " + std::to_string(iter);
        if (coloring.nodes_of(Color::Red).empty() || coloring.nodes_of(Color::Blue).empty())
            return "fewer than two colors at iteration " + std::to_string(iter);
    }
    return "";
}

// 4. Message-count identities: n(n-1) per gossip round, n(n-1)^2 for
//    flooding a complete graph, ratio 9 at n=10.
std::string message_count_identities() {
    Rng rng(404);
    for (int iter = 0; iter < 100; ++iter) {
        const int n = 2 + static_cast<int>(rng.next_below(49));
        const SpanningTree tree = oracles::random_tree(rng, n);
        WeightedGraph g(n);
        for (const Edge& e : tree.edges()) g.add_edge(e.u, e.v, e.cost_ms);
        const proto::Schedule sched = proto::compute_schedule(
            build_adjacency(g), 1.0, 64.0,
            static_cast<NodeId>(rng.next_below(static_cast<std::uint64_t>(n))));
        std::map<NodeId, gossip::ModelRef> models;
        for (NodeId id = 0; id < n; ++id) models[id] = gossip::ModelRef{id, 0, 1.0};
        const int got = gossip::run_round(sched, models).total_transmissions();
        if (got != n * (n - 1))
            return "gossip sent " + std::to_string(got) + " messages on a " + std::to_string(n) +
                   "-node tree";
    }
    for (const int n : {4, 7, 10}) {
        WeightedGraph k(n);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) k.add_edge(u, v, 1.0);
        std::map<NodeId, gossip::ModelRef> models;
        for (NodeId id = 0; id < n; ++id) models[id] = gossip::ModelRef{id, 0, 1.0};
        const int got = gossip::flood_round(k, models).message_count();
        if (got != n * (n - 1) * (n - 1))
            return "flooding sent " + std::to_string(got) + " messages on K" + std::to_string(n);
        if (n == 10 && got / 90 != 9) return "flood/gossip ratio is not 9";
    }
    return "";
}

// 5. Slot formula value and linearity within 1e-12 relative tolerance.
std::string slot_formula_checks() {
    if (slot_length(1.0, 1.0, 1000.0).seconds != 1.0) return "slot_length(1,1,1000) != 1";
    Rng rng(505);
    for (int iter = 0; iter < 1000; ++iter) {
        const double ping = rng.uniform(0.001, 50.0);
        const double size = rng.uniform(0.01, 200.0);
        const double psz = rng.uniform(1.0, 10000.0);
        const double base = slot_length(ping, size, psz).seconds;
        const double doubled = slot_length(ping, 2.0 * size, psz).seconds;
        const double halved = slot_length(ping, size, 2.0 * psz).seconds;
        if (std::abs(doubled - 2.0 * base) > 1e-12 * std::abs(2.0 * base))
            return "model-size linearity broke at iteration " + std::to_string(iter);
        if (std::abs(halved - 0.5 * base) > 1e-12 * std::abs(0.5 * base))
            return "ping-size linearity broke at iteration " + std::to_string(iter);
    }
    return "";
}

// 6. Full comparison grid: gossip strictly faster and wider than flooding in
//    every cell; at least 2x on the large models over the complete topology.
std::string comparison_grid() {
    cli::ExperimentConfig config;
    config.n = 10;
    config.seed = 1;
    std::ostringstream detail;
    const auto& topologies = cli::sweep_topologies();
    const auto& catalog = cli::model_catalog();
    for (std::size_t t = 0; t < topologies.size(); ++t) {
        config.topology = topologies[t];
        for (std::size_t m = 0; m < catalog.size(); ++m) {
            for (int rep = 0; rep < 5; ++rep) {
                const std::uint64_t seed =
                    cli::cell_seed(config.seed, static_cast<int>(t), static_cast<int>(m), rep);
                const cli::CellRun run = cli::run_cell(config, catalog[m].code, seed);
                const auto& g = run.gossip_metrics;
                const auto& f = run.flood_metrics;
                const std::string cell =
                    topologies[t] + "/" + catalog[m].code + "/rep" + std::to_string(rep);
                if (!(g.total_round_time_s < f.total_round_time_s))
                    return "round time not improved at " + cell + " (" +
                           std::to_string(g.total_round_time_s) + " vs " +
                           std::to_string(f.total_round_time_s) + ")";
                if (!(g.effective_bandwidth_mbps > f.effective_bandwidth_mbps))
                    return "bandwidth not improved at " + cell;
                const bool large_on_complete =
                    topologies[t] == "complete" && catalog[m].category == "large";
                if (large_on_complete && !(f.total_round_time_s >= 2.0 * g.total_round_time_s))
                    return "improvement below 2x at " + cell + " (factor " +
                           std::to_string(f.total_round_time_s / g.total_round_time_s) + ")";
            }
        }
    }
    return "";
}

// 7. allocate_rates equals the water-filling reference on 100 random
//    instances within 1e-9.
std::string max_min_fairness_oracle() {
    Rng rng(707);
    for (int iter = 0; iter < 100; ++iter) {
        const int flows = 1 + static_cast<int>(rng.next_below(6));
        const int resources = 1 + static_cast<int>(rng.next_below(5));
        std::vector<double> caps;
        for (int r = 0; r < resources; ++r) caps.push_back(rng.uniform(0.5, 40.0));
        std::vector<std::vector<int>> paths;
        for (int f = 0; f < flows; ++f) {
            std::vector<int> p;
            for (int r = 0; r < resources; ++r)
                if (rng.bernoulli(0.5)) p.push_back(r);
            if (p.empty())
                p.push_back(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(resources))));
            paths.push_back(std::move(p));
        }
        const auto got = sim::allocate_rates(paths, caps);
        const auto want = oracles::water_filling(paths, caps);
        for (std::size_t i = 0; i < got.size(); ++i)
            if (std::abs(got[i] - want[i]) > 1e-9)
                return "rate mismatch at iteration " + std::to_string(iter) + " flow " +
                       std::to_string(i);
    }
    return "";
}

// 8. Identical config + seed produce byte-identical CSV.
std::string run_determinism() {
    cli::ExperimentConfig config;
    config.topology = "er:p=0.3";
    config.n = 10;
    config.seed = 7;
    config.models = {"v3s", "b3"};
    config.mode = "both";
    auto read = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };
    const auto tmp = std::filesystem::temp_directory_path();
    config.out_dir = (tmp / "gossipmesh-acceptance-a").string();
    cli::run_experiment(config);
    const std::string first = read(config.out_dir + "/results.csv");
    std::filesystem::remove_all(config.out_dir);
    config.out_dir = (tmp / "gossipmesh-acceptance-b").string();
    cli::run_experiment(config);
    const std::string second = read(config.out_dir + "/results.csv");
    std::filesystem::remove_all(config.out_dir);
    if (first.empty()) return "no csv produced";
    return check(first == second, "csv bytes differ between identical runs");
}

// 9. Report averaging: (4, 6) -> 5 and symmetry over randomized report sets.
std::string protocol_averaging() {
    const auto agg = proto::aggregate_reports(
        {{0, "a", {{1, 4.0}}}, {1, "b", {{0, 6.0}}}});
    if (agg.matrix.at(0, 1) != 5.0) return "mean of 4 and 6 is not 5";
    Rng rng(909);
    for (int iter = 0; iter < 200; ++iter) {
        const int n = 2 + static_cast<int>(rng.next_below(7));
        std::vector<proto::ConnectionReport> reports;
        for (NodeId u = 0; u < n; ++u) {
            proto::ConnectionReport r{u, "node", {}};
            for (NodeId v = 0; v < n; ++v)
                if (v != u && rng.bernoulli(0.6))
                    r.neighbor_costs.emplace_back(v, rng.uniform(0.1, 20.0));
            reports.push_back(std::move(r));
        }
        const auto m = proto::aggregate_reports(reports).matrix;
        for (NodeId u = 0; u < n; ++u)
            for (NodeId v = 0; v < n; ++v)
                if (m.at(u, v) != m.at(v, u))
                    return "asymmetric matrix at iteration " + std::to_string(iter);
    }
    return "";
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"reference trace replay (23 slots, 90 sends, anchor rows)", reference_trace_replay},
        {"mst equals exhaustive enumeration on 200 random graphs", mst_oracle_equivalence},
        {"proper two-coloring on 500 random trees", coloring_properties},
        {"message-count identities n(n-1) and n(n-1)^2, ratio 9", message_count_identities},
        {"slot formula value and linearity", slot_formula_checks},
        {"gossip beats flooding across the 4x7 grid, 2x on large/complete", comparison_grid},
        {"max-min allocation matches water-filling on 100 instances", max_min_fairness_oracle},
        {"byte-identical csv for identical config and seed", run_determinism},
        {"report averaging and matrix symmetry", protocol_averaging},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        try {
            detail = criteria[i].run();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        if (detail.empty()) {
            std::printf("PASS  %zu. %s  (%lldms)\n", i + 1, criteria[i].name.c_str(),
                        static_cast<long long>(ms));
        } else {
            std::printf("FAIL  %zu. %s  (%lldms)\n      %s\n", i + 1, criteria[i].name.c_str(),
                        static_cast<long long>(ms), detail.c_str());
            ++failures;
        }
    }
    if (failures == 0)
        std::printf("all %zu criteria passed\n", criteria.size());
    else
        std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
