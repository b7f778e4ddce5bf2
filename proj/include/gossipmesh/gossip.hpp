#pragma once

#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gossipmesh/protocol.hpp"

namespace gossipmesh::gossip {

/// Marks a queue entry that a node generated itself rather than received.
inline constexpr NodeId kFromSelf = -1;

/// Identity of a model update: who produced it and in which round. The
/// payload is represented by its size only.
struct ModelRef {
    NodeId owner = -1;
    int round = 0;
    double size_mb = 1.0;

    std::pair<NodeId, int> key() const { return {owner, round}; }
    friend bool operator==(const ModelRef&, const ModelRef&) = default;
};

/// One pending forward: the model, where it came from, and (under
/// disruptions) which neighbors already received it.
struct QueueEntry {
    ModelRef model;
    NodeId received_from = kFromSelf;
    std::vector<NodeId> delivered_to;

    friend bool operator==(const QueueEntry&, const QueueEntry&) = default;
};

/// Per-node runtime state of the gossip round.
struct GossipNodeState {
    NodeId id = -1;
    Color color = Color::Red;
    std::vector<NodeId> tree_neighbors;  // ascending
    std::deque<QueueEntry> queue;
    std::vector<ModelRef> store_order;        // arrival order, own model first
    std::set<std::pair<NodeId, int>> store;   // keys of store_order

    int degree() const { return static_cast<int>(tree_neighbors.size()); }
    bool has(const ModelRef& m) const { return store.count(m.key()) > 0; }
};

/// One time slot. Slots are 1-based; Red owns the odd slots.
struct SlotTick {
    int index = 1;
    Color active_color() const { return index % 2 == 1 ? Color::Red : Color::Blue; }
};

struct Transmission {
    NodeId from = -1;
    NodeId to = -1;
    ModelRef model;

    friend bool operator==(const Transmission&, const Transmission&) = default;
};

/// Queue/store contents of one node at the end of a slot, by model owner.
struct NodeSnapshot {
    std::vector<NodeId> store_owners;
    std::vector<NodeId> queue_owners;

    friend bool operator==(const NodeSnapshot&, const NodeSnapshot&) = default;
};

struct SlotRecord {
    int tick = 0;
    Color color = Color::Red;
    std::vector<Transmission> transmissions;
    std::map<NodeId, NodeSnapshot> nodes;
};

struct GossipTrace {
    std::vector<NodeId> members;
    std::vector<SlotRecord> slots;

    int slot_count() const { return static_cast<int>(slots.size()); }
    int total_transmissions() const;

    /// One JSON object per line per slot: tick, color, transmissions and the
    /// post-slot queue/store snapshot, using node labels.
    std::string to_jsonl(const std::vector<std::string>& labels) const;
    /// Aligned text table, one row per slot and one column per node. Models
    /// still pending in the queue carry a '*' marker; delivered ones are
    /// plain.
    std::string to_table(const std::vector<std::string>& labels) const;
};

using NodeStates = std::map<NodeId, GossipNodeState>;

/// Every node starts with exactly its own model queued and stored.
NodeStates init_round(const proto::Schedule& schedule,
                      const std::map<NodeId, ModelRef>& models);

/// Advance one slot: every node of the active color with a non-empty queue
/// dequeues its head entry and sends it to all tree neighbors except the one
/// it arrived from. Receivers store it, and enqueue it for forwarding only
/// when they have another neighbor to forward to. Simultaneous arrivals are
/// enqueued in ascending sender id order.
std::vector<Transmission> step_slot(NodeStates& states, const SlotTick& tick);

/// step_slot with a set of offline nodes: an offline sender keeps its head
/// entry; a send towards an offline receiver is retained and re-issued on the
/// sender's next active slot, to the missed receivers only.
std::vector<Transmission> step_slot_disrupted(NodeStates& states,
                                              const std::set<NodeId>& disrupted,
                                              const SlotTick& tick);

/// Run slots until every node stores all models. Aborts with
/// NonTerminationError past 4*n^2 slots.
GossipTrace run_round(const proto::Schedule& schedule,
                      const std::map<NodeId, ModelRef>& models);

/// One flooding broadcast message. `depends_on` indexes the message that
/// first delivered the model to the sender (-1 when the sender is the
/// origin); `hop` is the causal depth.
struct FloodMessage {
    NodeId from = -1;
    NodeId to = -1;
    ModelRef model;
    int hop = 0;
    int depends_on = -1;
};

struct FloodTrace {
    int n = 0;
    std::vector<FloodMessage> messages;
    int message_count() const { return static_cast<int>(messages.size()); }
};

/// Naive flooding baseline on the full graph: each origin sends to every
/// neighbor, every node forwards each first-seen model to all neighbors
/// except the one it arrived from, duplicates are dropped on arrival.
FloodTrace flood_round(const WeightedGraph& graph, const std::map<NodeId, ModelRef>& models);

/// The canonical ten-node regression scenario: a fixed tree over nodes
/// A..I,K with unit costs, colored from C, one model per node. Its wave-by-
/// wave behavior is pinned by fixtures in the test suite.
struct ReferenceFixture {
    WeightedGraph graph;
    proto::Schedule schedule;
    std::map<NodeId, ModelRef> models;
};

ReferenceFixture make_reference_fixture(double model_size_mb = 1.0,
                                        double ping_size_bytes = 64.0);

}  // namespace gossipmesh::gossip
