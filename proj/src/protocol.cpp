#include "gossipmesh/protocol.hpp"

#include <algorithm>
#include <set>

#include "gossipmesh/rng.hpp"

namespace gossipmesh::proto {

void ConnectionReport::validate() const {
    if (reporter < 0) throw InvalidParamsError("report needs a non-negative reporter id");
    std::set<NodeId> seen;
    for (const auto& [id, cost] : neighbor_costs) {
        if (id == reporter) throw InvalidParamsError("report lists the reporter as a neighbor");
        if (!seen.insert(id).second)
            throw InvalidParamsError("report lists a neighbor twice");
        if (!(cost > 0.0)) throw InvalidParamsError("reported cost must be positive");
    }
}

nlohmann::json ConnectionReport::to_json() const {
    nlohmann::json costs = nlohmann::json::array();
    for (const auto& [id, cost] : neighbor_costs) costs.push_back({id, cost});
    return {{"reporter", reporter}, {"address", address}, {"neighbor_costs", costs}};
}

ConnectionReport ConnectionReport::from_json(const nlohmann::json& j) {
    ConnectionReport r;
    r.reporter = j.at("reporter").get<NodeId>();
    r.address = j.at("address").get<std::string>();
    for (const auto& e : j.at("neighbor_costs"))
        r.neighbor_costs.emplace_back(e.at(0).get<NodeId>(), e.at(1).get<double>());
    r.validate();
    return r;
}

Color Schedule::color_of(NodeId node) const { return coloring.at(index_of(node)); }

const std::vector<NodeId>& Schedule::tree_neighbors(NodeId node) const {
    const auto it = neighbor_table.find(node);
    if (it == neighbor_table.end())
        throw InvalidParamsError("node not in schedule: " + std::to_string(node));
    return it->second;
}

int Schedule::index_of(NodeId node) const {
    const auto it = std::lower_bound(members.begin(), members.end(), node);
    if (it == members.end() || *it != node)
        throw InvalidParamsError("node not in schedule: " + std::to_string(node));
    return static_cast<int>(it - members.begin());
}

nlohmann::json Schedule::to_json() const {
    nlohmann::json tree_edges = nlohmann::json::array();
    for (const Edge& e : tree.edges())
        tree_edges.push_back({members[static_cast<std::size_t>(e.u)],
                              members[static_cast<std::size_t>(e.v)], e.cost_ms});
    nlohmann::json colors = nlohmann::json::array();
    for (int i = 0; i < coloring.node_count(); ++i) colors.push_back(color_name(coloring.at(i)));
    nlohmann::json table = nlohmann::json::object();
    for (const auto& [node, nbrs] : neighbor_table) table[std::to_string(node)] = nbrs;
    return {{"members", members},
            {"tree_edges", tree_edges},
            {"colors", colors},
            {"slot",
             {{"seconds", slot.seconds},
              {"ping_max_ms", slot.ping_max_ms},
              {"model_size_mb", slot.model_size_mb},
              {"ping_size_bytes", slot.ping_size_bytes}}},
            {"neighbor_table", table}};
}

Schedule Schedule::from_json(const nlohmann::json& j) {
    const auto members = j.at("members").get<std::vector<NodeId>>();
    const int n = static_cast<int>(members.size());
    auto index_of = [&](NodeId id) {
        const auto it = std::lower_bound(members.begin(), members.end(), id);
        if (it == members.end() || *it != id)
            throw InvalidParamsError("schedule edge references a non-member");
        return static_cast<NodeId>(it - members.begin());
    };
    std::vector<Edge> edges;
    for (const auto& e : j.at("tree_edges")) {
        const NodeId u = index_of(e.at(0).get<NodeId>());
        const NodeId v = index_of(e.at(1).get<NodeId>());
        edges.push_back({std::min(u, v), std::max(u, v), e.at(2).get<double>()});
    }
    std::vector<Color> colors;
    for (const auto& c : j.at("colors"))
        colors.push_back(c.get<std::string>() == "red" ? Color::Red : Color::Blue);
    const auto& s = j.at("slot");
    Schedule out{members, SpanningTree(n, std::move(edges)), TwoColoring(std::move(colors)),
                 SlotLength{s.at("seconds").get<double>(), s.at("ping_max_ms").get<double>(),
                            s.at("model_size_mb").get<double>(),
                            s.at("ping_size_bytes").get<double>()},
                 {}};
    for (const auto& [key, nbrs] : j.at("neighbor_table").items())
        out.neighbor_table[std::stoi(key)] = nbrs.get<std::vector<NodeId>>();
    return out;
}

std::vector<NodeId> ModeratorState::live_nodes() const {
    std::vector<NodeId> out;
    out.reserve(table.size());
    for (const auto& [id, report] : table) out.push_back(id);
    return out;
}

NodeId elect_initial_moderator(const std::vector<NodeId>& nodes, std::uint64_t seed) {
    if (nodes.empty()) throw EmptyMembershipError("cannot elect a moderator with no nodes");
    std::vector<NodeId> sorted = nodes;
    std::sort(sorted.begin(), sorted.end());
    const std::uint64_t pick = splitmix64(splitmix64(seed) ^ 0x6d6f6465ULL) % sorted.size();
    return sorted[static_cast<std::size_t>(pick)];
}

AggregatedReports aggregate_reports(const std::vector<ConnectionReport>& reports, bool strict) {
    if (reports.empty()) throw EmptyMembershipError("no reports to aggregate");
    std::vector<NodeId> members;
    for (const auto& r : reports) {
        r.validate();
        members.push_back(r.reporter);
    }
    std::sort(members.begin(), members.end());
    if (std::adjacent_find(members.begin(), members.end()) != members.end())
        throw InconsistentReportsError("duplicate reporter id");
    auto index_of = [&](NodeId id) -> int {
        const auto it = std::lower_bound(members.begin(), members.end(), id);
        if (it == members.end() || *it != id) return -1;
        return static_cast<int>(it - members.begin());
    };

    const int n = static_cast<int>(members.size());
    // claims[u][v] = cost u reported for its link towards v
    std::vector<std::map<int, double>> claims(static_cast<std::size_t>(n));
    for (const auto& r : reports) {
        const int u = index_of(r.reporter);
        for (const auto& [nbr, cost] : r.neighbor_costs) {
            const int v = index_of(nbr);
            if (v < 0) continue;  // mention of a node that sent no report
            claims[static_cast<std::size_t>(u)][v] = cost;
        }
    }

    AdjacencyMatrix matrix(n);
    for (int u = 0; u < n; ++u) {
        for (const auto& [v, cost] : claims[static_cast<std::size_t>(u)]) {
            if (v < u) continue;  // handled from the lower side
            const auto& back = claims[static_cast<std::size_t>(v)];
            const auto it = back.find(u);
            if (it != back.end()) {
                matrix.set(u, v, (cost + it->second) / 2.0);
            } else {
                if (strict)
                    throw InconsistentReportsError(
                        "one-sided link " + std::to_string(members[static_cast<std::size_t>(u)]) +
                        "->" + std::to_string(members[static_cast<std::size_t>(v)]));
                matrix.set(u, v, cost);
            }
        }
        // one-sided claims from the higher side
        for (int v = 0; v < u; ++v) {
            const auto it = claims[static_cast<std::size_t>(u)].find(v);
            if (it == claims[static_cast<std::size_t>(u)].end()) continue;
            if (claims[static_cast<std::size_t>(v)].count(u)) continue;  // already averaged
            if (strict)
                throw InconsistentReportsError(
                    "one-sided link " + std::to_string(members[static_cast<std::size_t>(u)]) +
                    "->" + std::to_string(members[static_cast<std::size_t>(v)]));
            matrix.set(u, v, it->second);
        }
    }
    return {std::move(matrix), std::move(members)};
}

Schedule compute_schedule(const AdjacencyMatrix& matrix, double model_size_mb,
                          double ping_size_bytes, NodeId root_index,
                          std::vector<NodeId> members) {
    const int n = matrix.node_count();
    if (!matrix.connected()) throw DisconnectedGraphError("schedule needs a connected matrix");
    if (members.empty()) {
        members.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) members[static_cast<std::size_t>(i)] = i;
    }
    if (static_cast<int>(members.size()) != n)
        throw InvalidParamsError("member list does not match the matrix");
    const WeightedGraph graph = matrix.to_graph();
    SpanningTree tree = prim_mst(graph, root_index);
    TwoColoring coloring = bfs_two_coloring(tree, root_index);
    const double ping_max = max_ping_per_color(matrix, tree, coloring);
    const SlotLength slot = slot_length(ping_max, model_size_mb, ping_size_bytes);
    std::map<NodeId, std::vector<NodeId>> table;
    for (int i = 0; i < n; ++i) {
        std::vector<NodeId> nbrs;
        for (const NodeId j : tree.neighbors(i))
            nbrs.push_back(members[static_cast<std::size_t>(j)]);
        std::sort(nbrs.begin(), nbrs.end());
        table[members[static_cast<std::size_t>(i)]] = std::move(nbrs);
    }
    return {std::move(members), std::move(tree), std::move(coloring), slot, std::move(table)};
}

std::map<NodeId, NodeId> round_robin_votes(const ModeratorState& state) {
    const std::vector<NodeId> live = state.live_nodes();
    if (live.empty()) throw EmptyMembershipError("no live nodes to vote");
    auto it = std::upper_bound(live.begin(), live.end(), state.current);
    const NodeId next = it == live.end() ? live.front() : *it;
    std::map<NodeId, NodeId> votes;
    for (const NodeId v : live) votes[v] = next;
    return votes;
}

ModeratorState rotate_moderator(const ModeratorState& state,
                                const std::map<NodeId, NodeId>& votes) {
    const std::vector<NodeId> live = state.live_nodes();
    if (live.empty()) throw EmptyMembershipError("no live nodes");
    for (const NodeId id : live)
        if (!votes.count(id))
            throw MissingVotesError("node " + std::to_string(id) + " did not vote");
    std::map<NodeId, int> tally;
    for (const NodeId id : live) {
        const NodeId candidate = votes.at(id);
        if (!state.table.count(candidate))
            throw InvalidParamsError("vote for a node outside the membership: " +
                                     std::to_string(candidate));
        ++tally[candidate];
    }
    NodeId winner = -1;
    int best = -1;
    for (const auto& [candidate, count] : tally) {  // ascending ids: ties go to the lowest
        if (count > best) {
            winner = candidate;
            best = count;
        }
    }
    ModeratorState next = state;
    next.current = winner;
    next.round = state.round + 1;
    return next;
}

std::pair<ModeratorState, Schedule> handle_membership_change(
    const ModeratorState& state, const std::vector<ConnectionReport>& joins,
    const std::vector<NodeId>& leaves, double model_size_mb, double ping_size_bytes) {
    const bool changed = !joins.empty() || !leaves.empty();
    if (!changed && state.schedule) return {state, *state.schedule};

    ModeratorState next = state;
    for (const NodeId id : leaves) next.table.erase(id);
    for (const auto& r : joins) {
        r.validate();
        next.table[r.reporter] = r;
    }
    if (next.table.empty()) throw EmptyMembershipError("membership change removed every node");

    std::vector<ConnectionReport> reports;
    reports.reserve(next.table.size());
    for (const auto& [id, r] : next.table) reports.push_back(r);
    AggregatedReports agg = aggregate_reports(reports);
    Schedule schedule = compute_schedule(agg.matrix, model_size_mb, ping_size_bytes, 0,
                                         std::move(agg.members));
    if (!next.table.count(next.current)) next.current = next.table.begin()->first;
    next.schedule = schedule;
    return {std::move(next), std::move(schedule)};
}

nlohmann::json moderator_announce_message(NodeId moderator, int round) {
    return {{"kind", "moderator_announce"}, {"moderator", moderator}, {"round", round}};
}

nlohmann::json connection_report_message(const ConnectionReport& report) {
    nlohmann::json j = report.to_json();
    j["kind"] = "connection_report";
    return j;
}

nlohmann::json schedule_message(const Schedule& schedule) {
    nlohmann::json j = schedule.to_json();
    j["kind"] = "schedule";
    return j;
}

nlohmann::json vote_message(NodeId voter, NodeId candidate) {
    return {{"kind", "vote"}, {"voter", voter}, {"candidate", candidate}};
}

nlohmann::json handover_message(NodeId from, NodeId to, int round,
                                const std::vector<ConnectionReport>& table) {
    nlohmann::json reports = nlohmann::json::array();
    for (const auto& r : table) reports.push_back(r.to_json());
    return {{"kind", "handover"}, {"from", from}, {"to", to}, {"round", round},
            {"table", reports}};
}

std::string message_kind(const nlohmann::json& message) {
    return message.at("kind").get<std::string>();
}

}  // namespace gossipmesh::proto
