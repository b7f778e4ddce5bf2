#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gossipmesh/graph.hpp"

namespace gossipmesh::proto {

/// One node's view of its own links, as sent to the moderator.
struct ConnectionReport {
    NodeId reporter = -1;
    std::string address;
    std::vector<std::pair<NodeId, double>> neighbor_costs;

    void validate() const;
    nlohmann::json to_json() const;
    static ConnectionReport from_json(const nlohmann::json& j);

    friend bool operator==(const ConnectionReport&, const ConnectionReport&) = default;
};

/// Everything the moderator broadcasts after its graph computations: the
/// tree, the coloring, the slot length and per-node neighbor tables.
///
/// `members` maps dense tree indices back to the original node ids, so a
/// schedule stays valid after nodes leave and the id space gets holes. The
/// neighbor table is keyed by original ids.
struct Schedule {
    std::vector<NodeId> members;
    SpanningTree tree;
    TwoColoring coloring;
    SlotLength slot;
    std::map<NodeId, std::vector<NodeId>> neighbor_table;

    int node_count() const { return static_cast<int>(members.size()); }
    Color color_of(NodeId node) const;
    const std::vector<NodeId>& tree_neighbors(NodeId node) const;
    int index_of(NodeId node) const;

    nlohmann::json to_json() const;
    static Schedule from_json(const nlohmann::json& j);

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// The rotating moderator: who it is, the full connection table it holds,
/// the round index, and the last schedule it computed.
struct ModeratorState {
    NodeId current = -1;
    int round = 0;
    std::map<NodeId, ConnectionReport> table;
    std::optional<Schedule> schedule;

    std::vector<NodeId> live_nodes() const;
};

/// Uniform pick among `nodes`, deterministic per seed.
NodeId elect_initial_moderator(const std::vector<NodeId>& nodes, std::uint64_t seed);

struct AggregatedReports {
    AdjacencyMatrix matrix;      // dense, over sorted reporter ids
    std::vector<NodeId> members;  // dense index -> reporter id
};

/// Merge per-node reports into one symmetric matrix. A pair reported from
/// both sides gets the arithmetic mean; a single-sided report is taken at
/// face value unless `strict`, which rejects it. Mentions of ids that sent
/// no report are dropped.
AggregatedReports aggregate_reports(const std::vector<ConnectionReport>& reports,
                                    bool strict = false);

/// Compose prim_mst + bfs_two_coloring + max_ping_per_color + slot_length
/// over a connected matrix. `root_index` is a dense index. `members` defaults
/// to the identity mapping.
Schedule compute_schedule(const AdjacencyMatrix& matrix, double model_size_mb,
                          double ping_size_bytes, NodeId root_index = 0,
                          std::vector<NodeId> members = {});

/// Default voting strategy: every node votes for the moderator's successor
/// in ascending id order (wrapping), so the role round-robins.
std::map<NodeId, NodeId> round_robin_votes(const ModeratorState& state);

/// Plurality winner, ties broken by lowest id. Every live node must vote.
/// The connection table and cached schedule carry over; the round advances.
ModeratorState rotate_moderator(const ModeratorState& state,
                                const std::map<NodeId, NodeId>& votes);

/// Apply joins/leaves and recompute the schedule over the new membership.
/// With no change the previous schedule is returned as-is (computing it
/// first if this is the initial round).
std::pair<ModeratorState, Schedule> handle_membership_change(
    const ModeratorState& state, const std::vector<ConnectionReport>& joins,
    const std::vector<NodeId>& leaves, double model_size_mb, double ping_size_bytes);

// Control-plane messages. Every message is a JSON object carrying a "kind"
// discriminator; schemas are documented in the README.
nlohmann::json moderator_announce_message(NodeId moderator, int round);
nlohmann::json connection_report_message(const ConnectionReport& report);
nlohmann::json schedule_message(const Schedule& schedule);
nlohmann::json vote_message(NodeId voter, NodeId candidate);
nlohmann::json handover_message(NodeId from, NodeId to, int round,
                                const std::vector<ConnectionReport>& table);
std::string message_kind(const nlohmann::json& message);

}  // namespace gossipmesh::proto
