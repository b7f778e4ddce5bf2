#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common/oracles.hpp"
#include "gossipmesh/protocol.hpp"
#include "gossipmesh/rng.hpp"

using namespace gossipmesh;
using namespace gossipmesh::proto;

namespace {

ConnectionReport report(NodeId who, std::vector<std::pair<NodeId, double>> costs) {
    return {who, "node-" + std::to_string(who), std::move(costs)};
}

// symmetric reports for an arbitrary graph
std::vector<ConnectionReport> reports_for(const WeightedGraph& g) {
    std::vector<ConnectionReport> out;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        ConnectionReport r = report(u, {});
        for (const NodeId v : g.neighbors(u)) r.neighbor_costs.emplace_back(v, *g.cost(u, v));
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

TEST_CASE("initial moderator election") {
    CHECK(elect_initial_moderator({7}, 3) == 7);
    const std::vector<NodeId> nodes{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    const NodeId a = elect_initial_moderator(nodes, 42);
    CHECK(a == elect_initial_moderator(nodes, 42));
    CHECK(a >= 0);
    CHECK(a <= 9);
    CHECK_THROWS_AS(elect_initial_moderator({}, 1), EmptyMembershipError);
}

TEST_CASE("election frequencies are close to uniform") {
    const std::vector<NodeId> nodes{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::array<int, 10> hits{};
    const int trials = 10000;
    for (int seed = 0; seed < trials; ++seed)
        ++hits[static_cast<std::size_t>(elect_initial_moderator(nodes, static_cast<std::uint64_t>(seed)))];
    for (const int h : hits) {
        const double freq = static_cast<double>(h) / trials;
        CHECK(freq > 0.08);
        CHECK(freq < 0.12);
    }
}

TEST_CASE("two-sided costs average, one-sided pass through") {
    const auto agg = aggregate_reports({report(0, {{1, 4.0}}), report(1, {{0, 6.0}})});
    CHECK(agg.matrix.at(0, 1) == 5.0);

    const auto one_sided = aggregate_reports({report(0, {{1, 4.0}}), report(1, {})});
    CHECK(one_sided.matrix.at(0, 1) == 4.0);
    CHECK(one_sided.matrix.at(1, 0) == 4.0);

    CHECK_THROWS_AS(aggregate_reports({report(0, {{1, 4.0}}), report(1, {})}, true),
                    InconsistentReportsError);
}

TEST_CASE("symmetric equal reports reproduce themselves") {
    Rng rng(17);
    const WeightedGraph g = oracles::random_connected_graph(rng, 8);
    const auto agg = aggregate_reports(reports_for(g));
    CHECK(agg.matrix == build_adjacency(g));
}

TEST_CASE("aggregation is symmetric for arbitrary asymmetric inputs") {
    Rng rng(19);
    for (int iter = 0; iter < 50; ++iter) {
        const int n = 3 + static_cast<int>(rng.next_below(6));
        std::vector<ConnectionReport> reports;
        for (NodeId u = 0; u < n; ++u) {
            ConnectionReport r = report(u, {});
            for (NodeId v = 0; v < n; ++v)
                if (v != u && rng.bernoulli(0.5)) r.neighbor_costs.emplace_back(v, rng.uniform(0.5, 9.0));
            reports.push_back(std::move(r));
        }
        const auto agg = aggregate_reports(reports);
        for (NodeId u = 0; u < n; ++u)
            for (NodeId v = 0; v < n; ++v) CHECK(agg.matrix.at(u, v) == agg.matrix.at(v, u));
    }
}

TEST_CASE("report validation") {
    CHECK_THROWS_AS(report(0, {{1, 2.0}, {1, 3.0}}).validate(), InvalidParamsError);
    CHECK_THROWS_AS(report(0, {{1, 0.0}}).validate(), InvalidParamsError);
    CHECK_THROWS_AS(report(0, {{0, 1.0}}).validate(), InvalidParamsError);
    CHECK_THROWS_AS(aggregate_reports({report(0, {{1, 1.0}}), report(0, {{1, 2.0}})}),
                    InconsistentReportsError);
}

TEST_CASE("votes for departed nodes are rejected") {
    ModeratorState state;
    state.current = 0;
    for (NodeId id = 0; id < 3; ++id) state.table[id] = report(id, {});
    std::map<NodeId, NodeId> votes{{0, 9}, {1, 9}, {2, 9}};
    CHECK_THROWS_AS(rotate_moderator(state, votes), InvalidParamsError);
}

TEST_CASE("schedule composition on a three-node path") {
    WeightedGraph g(3);
    g.add_edge(0, 1, 2.0);
    g.add_edge(1, 2, 7.0);
    const Schedule s = compute_schedule(build_adjacency(g), 1.0, 1000.0, 0);
    CHECK(s.slot.seconds == 7.0);
    CHECK(s.color_of(0) == Color::Red);
    CHECK(s.color_of(1) == Color::Blue);
    CHECK(s.color_of(2) == Color::Red);
    CHECK(s.tree_neighbors(1) == std::vector<NodeId>{0, 2});
}

TEST_CASE("two-node schedule") {
    WeightedGraph g(2);
    g.add_edge(0, 1, 3.0);
    const Schedule s = compute_schedule(build_adjacency(g), 1.0, 64.0, 0);
    CHECK(s.tree.edges() == std::vector<Edge>{{0, 1, 3.0}});
    CHECK(s.color_of(0) == Color::Red);
    CHECK(s.color_of(1) == Color::Blue);
}

TEST_CASE("disconnected matrices are rejected") {
    WeightedGraph g(4);
    g.add_edge(0, 1, 1.0);
    g.add_edge(2, 3, 1.0);
    CHECK_THROWS_AS(compute_schedule(build_adjacency(g), 1.0, 64.0, 0), DisconnectedGraphError);
}

TEST_CASE("schedules are deterministic byte for byte") {
    Rng rng(23);
    const WeightedGraph g = oracles::random_connected_graph(rng, 8);
    const Schedule a = compute_schedule(build_adjacency(g), 14.0, 64.0, 0);
    const Schedule b = compute_schedule(build_adjacency(g), 14.0, 64.0, 0);
    CHECK(a == b);
    CHECK(a.to_json().dump() == b.to_json().dump());
    CHECK(Schedule::from_json(a.to_json()) == a);
}

TEST_CASE("moderator rotation by unanimous vote") {
    ModeratorState state;
    state.current = 0;
    for (NodeId id = 0; id < 4; ++id) state.table[id] = report(id, {});
    std::map<NodeId, NodeId> votes;
    for (NodeId id = 0; id < 4; ++id) votes[id] = 1;
    const ModeratorState next = rotate_moderator(state, votes);
    CHECK(next.current == 1);
    CHECK(next.round == 1);
    CHECK(next.table.size() == state.table.size());
}

TEST_CASE("vote ties break towards the lowest id") {
    ModeratorState state;
    state.current = 0;
    for (NodeId id = 0; id < 10; ++id) state.table[id] = report(id, {});
    std::map<NodeId, NodeId> votes;
    for (NodeId id = 0; id < 10; ++id) votes[id] = id < 5 ? 3 : 2;
    CHECK(rotate_moderator(state, votes).current == 2);
}

TEST_CASE("abstaining nodes block rotation") {
    ModeratorState state;
    state.current = 0;
    for (NodeId id = 0; id < 3; ++id) state.table[id] = report(id, {});
    std::map<NodeId, NodeId> votes{{0, 1}, {1, 1}};
    CHECK_THROWS_AS(rotate_moderator(state, votes), MissingVotesError);
}

TEST_CASE("round-robin voting hands the role to the next id") {
    ModeratorState state;
    state.current = 0;
    for (NodeId id = 0; id < 4; ++id) state.table[id] = report(id, {});
    CHECK(rotate_moderator(state, round_robin_votes(state)).current == 1);
    state.current = 3;
    CHECK(rotate_moderator(state, round_robin_votes(state)).current == 0);  // wraps

    // a long rotation chain keeps exactly one table holder
    ModeratorState s = state;
    for (int i = 0; i < 8; ++i) {
        const ModeratorState next = rotate_moderator(s, round_robin_votes(s));
        CHECK(next.table == state.table);
        CHECK(next.round == s.round + 1);
        s = next;
    }
    CHECK(s.current == 3);  // 8 rotations from 3 over 4 nodes
}

TEST_CASE("membership changes drive schedule recomputation") {
    Rng rng(29);
    WeightedGraph g(5);
    for (int u = 0; u < 5; ++u)
        for (int v = u + 1; v < 5; ++v) g.add_edge(u, v, rng.uniform(1.0, 5.0));
    ModeratorState state;
    state.current = 0;
    for (const auto& r : reports_for(g)) state.table[r.reporter] = r;

    auto [s1, sched1] = handle_membership_change(state, {}, {}, 14.0, 64.0);
    auto [s2, sched2] = handle_membership_change(s1, {}, {}, 14.0, 64.0);
    CHECK(sched1 == sched2);  // no change, same schedule
    CHECK(sched1.to_json().dump() == sched2.to_json().dump());

    // remove a tree leaf: one fewer member, still a valid schedule
    NodeId leaf = -1;
    for (const NodeId id : sched1.members)
        if (sched1.tree_neighbors(id).size() == 1) leaf = id;
    REQUIRE(leaf >= 0);
    auto [s3, sched3] = handle_membership_change(s2, {}, {leaf}, 14.0, 64.0);
    CHECK(sched3.node_count() == 4);
    CHECK(static_cast<int>(sched3.tree.edges().size()) == 3);
    CHECK(!s3.table.count(leaf));

    // add a node connected to everyone: proper coloring over 5 members again
    ConnectionReport joiner = report(leaf, {});
    for (const NodeId id : sched3.members) joiner.neighbor_costs.emplace_back(id, 2.5);
    auto [s4, sched4] = handle_membership_change(s3, {joiner}, {}, 14.0, 64.0);
    CHECK(sched4.node_count() == 5);
    CHECK(sched4.coloring.proper_on(sched4.tree));
}

TEST_CASE("removals that split the graph are rejected") {
    WeightedGraph g(3);
    g.add_edge(0, 1, 1.0);
    g.add_edge(1, 2, 1.0);
    ModeratorState state;
    state.current = 1;
    for (const auto& r : reports_for(g)) state.table[r.reporter] = r;
    CHECK_THROWS_AS(handle_membership_change(state, {}, {1}, 1.0, 64.0),
                    DisconnectedGraphError);
}

TEST_CASE("control messages round-trip through json") {
    const nlohmann::json announce = moderator_announce_message(4, 2);
    CHECK(message_kind(announce) == "moderator_announce");
    CHECK(announce.at("moderator") == 4);

    const ConnectionReport r = report(3, {{1, 2.0}, {2, 4.5}});
    const nlohmann::json rmsg = connection_report_message(r);
    CHECK(message_kind(rmsg) == "connection_report");
    CHECK(ConnectionReport::from_json(rmsg) == r);

    WeightedGraph g(3);
    g.add_edge(0, 1, 2.0);
    g.add_edge(1, 2, 3.0);
    const Schedule s = compute_schedule(build_adjacency(g), 1.0, 64.0, 0);
    const nlohmann::json smsg = schedule_message(s);
    CHECK(message_kind(smsg) == "schedule");
    CHECK(Schedule::from_json(smsg) == s);

    CHECK(message_kind(vote_message(1, 2)) == "vote");
    const nlohmann::json h = handover_message(0, 1, 5, {r});
    CHECK(message_kind(h) == "handover");
    CHECK(h.at("table").size() == 1);
}
