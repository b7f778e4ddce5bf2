#include "gossipmesh/gossip.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace gossipmesh::gossip {

int GossipTrace::total_transmissions() const {
    int total = 0;
    for (const auto& s : slots) total += static_cast<int>(s.transmissions.size());
    return total;
}

NodeStates init_round(const proto::Schedule& schedule,
                      const std::map<NodeId, ModelRef>& models) {
    if (models.size() != schedule.members.size())
        throw InvalidParamsError("need exactly one model per scheduled node");
    NodeStates states;
    for (const NodeId id : schedule.members) {
        const auto it = models.find(id);
        if (it == models.end())
            throw InvalidParamsError("no model for node " + std::to_string(id));
        if (it->second.owner != id)
            throw InvalidParamsError("model owner does not match its node");
        if (!(it->second.size_mb > 0.0)) throw InvalidParamsError("model size must be positive");
        GossipNodeState st;
        st.id = id;
        st.color = schedule.color_of(id);
        st.tree_neighbors = schedule.tree_neighbors(id);
        st.queue.push_back({it->second, kFromSelf, {}});
        st.store_order.push_back(it->second);
        st.store.insert(it->second.key());
        states[id] = std::move(st);
    }
    return states;
}

std::vector<Transmission> step_slot_disrupted(NodeStates& states,
                                              const std::set<NodeId>& disrupted,
                                              const SlotTick& tick) {
    const Color active = tick.active_color();
    std::vector<Transmission> out;

    // Collect sends first so that all nodes act on the same pre-slot state.
    for (auto& [id, st] : states) {
        if (st.color != active || disrupted.count(id) || st.queue.empty()) continue;
        QueueEntry& entry = st.queue.front();
        if (!st.has(entry.model))
            throw InconsistentStateError("node " + std::to_string(id) +
                                         " would send a model it does not store");
        std::vector<NodeId> targets;
        std::vector<NodeId> missed;
        for (const NodeId nbr : st.tree_neighbors) {
            if (nbr == entry.received_from) continue;
            if (std::find(entry.delivered_to.begin(), entry.delivered_to.end(), nbr) !=
                entry.delivered_to.end())
                continue;
            if (disrupted.count(nbr))
                missed.push_back(nbr);
            else
                targets.push_back(nbr);
        }
        for (const NodeId to : targets) {
            out.push_back({id, to, entry.model});
            entry.delivered_to.push_back(to);
        }
        // Fully delivered entries leave the queue; anything missed keeps the
        // entry at the head for the node's next turn.
        if (missed.empty()) st.queue.pop_front();
    }

    // Deliveries: simultaneous arrivals enqueue in ascending sender order.
    std::vector<Transmission> arrivals = out;
    std::sort(arrivals.begin(), arrivals.end(), [](const Transmission& a, const Transmission& b) {
        return std::tie(a.to, a.from) < std::tie(b.to, b.from);
    });
    for (const Transmission& tx : arrivals) {
        GossipNodeState& recv = states.at(tx.to);
        if (recv.has(tx.model))
            throw InconsistentStateError("duplicate arrival of model " +
                                         std::to_string(tx.model.owner) + " at node " +
                                         std::to_string(tx.to));
        recv.store.insert(tx.model.key());
        recv.store_order.push_back(tx.model);
        const bool can_forward = std::any_of(
            recv.tree_neighbors.begin(), recv.tree_neighbors.end(),
            [&](NodeId nbr) { return nbr != tx.from; });
        if (can_forward) recv.queue.push_back({tx.model, tx.from, {}});
    }
    return out;
}

std::vector<Transmission> step_slot(NodeStates& states, const SlotTick& tick) {
    return step_slot_disrupted(states, {}, tick);
}

static NodeSnapshot snapshot_of(const GossipNodeState& st) {
    NodeSnapshot snap;
    for (const ModelRef& m : st.store_order) snap.store_owners.push_back(m.owner);
    for (const QueueEntry& e : st.queue) snap.queue_owners.push_back(e.model.owner);
    return snap;
}

GossipTrace run_round(const proto::Schedule& schedule,
                      const std::map<NodeId, ModelRef>& models) {
    NodeStates states = init_round(schedule, models);
    const std::size_t n = schedule.members.size();
    auto complete = [&] {
        return std::all_of(states.begin(), states.end(),
                           [&](const auto& kv) { return kv.second.store.size() == n; });
    };
    GossipTrace trace;
    trace.members = schedule.members;
    const int guard = 4 * static_cast<int>(n) * static_cast<int>(n);
    int tick = 1;
    while (!complete()) {
        if (tick > guard)
            throw NonTerminationError("round not complete after " + std::to_string(guard) +
                                      " slots");
        const SlotTick slot{tick};
        SlotRecord record;
        record.tick = tick;
        record.color = slot.active_color();
        record.transmissions = step_slot(states, slot);
        for (const auto& [id, st] : states) record.nodes[id] = snapshot_of(st);
        trace.slots.push_back(std::move(record));
        ++tick;
    }
    return trace;
}

std::string GossipTrace::to_jsonl(const std::vector<std::string>& labels) const {
    auto name = [&](NodeId id) {
        return id >= 0 && id < static_cast<NodeId>(labels.size())
                   ? labels[static_cast<std::size_t>(id)]
                   : std::to_string(id);
    };
    std::ostringstream os;
    for (const SlotRecord& s : slots) {
        nlohmann::json line;
        line["tick"] = s.tick;
        line["color"] = color_name(s.color);
        nlohmann::json txs = nlohmann::json::array();
        for (const Transmission& t : s.transmissions)
            txs.push_back({{"from", name(t.from)}, {"to", name(t.to)}, {"model", name(t.model.owner)}});
        line["transmissions"] = txs;
        nlohmann::json queues = nlohmann::json::object();
        nlohmann::json stores = nlohmann::json::object();
        for (const auto& [id, snap] : s.nodes) {
            nlohmann::json q = nlohmann::json::array();
            for (const NodeId o : snap.queue_owners) q.push_back(name(o));
            queues[name(id)] = q;
            nlohmann::json st = nlohmann::json::array();
            for (const NodeId o : snap.store_owners) st.push_back(name(o));
            stores[name(id)] = st;
        }
        line["queues"] = queues;
        line["stores"] = stores;
        os << line.dump() << "\n";
    }
    return os.str();
}

std::string GossipTrace::to_table(const std::vector<std::string>& labels) const {
    auto name = [&](NodeId id) {
        return id >= 0 && id < static_cast<NodeId>(labels.size())
                   ? labels[static_cast<std::size_t>(id)]
                   : std::to_string(id);
    };
    // Cell per node: store order, '*' marking models still pending in the queue.
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"slot", "color"};
    for (const NodeId id : members) header.push_back(name(id));
    rows.push_back(header);
    for (const SlotRecord& s : slots) {
        std::vector<std::string> row{std::to_string(s.tick), color_name(s.color)};
        for (const NodeId id : members) {
            const NodeSnapshot& snap = s.nodes.at(id);
            std::multiset<NodeId> pending(snap.queue_owners.begin(), snap.queue_owners.end());
            std::string cell;
            for (const NodeId o : snap.store_owners) {
                if (!cell.empty()) cell += ' ';
                cell += name(o);
                const auto it = pending.find(o);
                if (it != pending.end()) {
                    cell += '*';
                    pending.erase(it);
                }
            }
            row.push_back(cell);
        }
        rows.push_back(row);
    }
    std::vector<std::size_t> width(rows.front().size(), 0);
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    std::ostringstream os;
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            os << row[c] << std::string(width[c] - row[c].size(), ' ');
            os << (c + 1 == row.size() ? "" : "  ");
        }
        os << "\n";
    }
    return os.str();
}

FloodTrace flood_round(const WeightedGraph& graph, const std::map<NodeId, ModelRef>& models) {
    const int n = graph.node_count();
    if (!is_connected(graph)) throw DisconnectedGraphError("flooding needs a connected graph");
    FloodTrace trace;
    trace.n = n;

    std::vector<std::set<std::pair<NodeId, int>>> has(static_cast<std::size_t>(n));
    for (const auto& [id, model] : models) {
        if (id < 0 || id >= n) throw InvalidParamsError("model owner out of range");
        has[static_cast<std::size_t>(id)].insert(model.key());
    }

    // hop 0: every origin sends its model to all its neighbors
    std::vector<int> wave;  // indices of messages emitted at the current hop
    for (const auto& [origin, model] : models) {
        for (const NodeId to : graph.neighbors(origin)) {
            trace.messages.push_back({origin, to, model, 0, -1});
            wave.push_back(static_cast<int>(trace.messages.size()) - 1);
        }
    }

    int hop = 0;
    while (!wave.empty()) {
        ++hop;
        // group this wave's arrivals by (receiver, model); the first-seen
        // copy is the one from the lowest sender id
        std::map<std::pair<NodeId, std::pair<NodeId, int>>, int> first;
        for (const int idx : wave) {
            const FloodMessage& msg = trace.messages[static_cast<std::size_t>(idx)];
            const auto key = std::make_pair(msg.to, msg.model.key());
            const auto it = first.find(key);
            if (it == first.end() ||
                msg.from < trace.messages[static_cast<std::size_t>(it->second)].from)
                first[key] = idx;
        }
        std::vector<int> next;
        for (const auto& [key, idx] : first) {
            const FloodMessage msg = trace.messages[static_cast<std::size_t>(idx)];
            auto& store = has[static_cast<std::size_t>(msg.to)];
            if (store.count(msg.model.key())) continue;  // duplicate, dropped
            store.insert(msg.model.key());
            for (const NodeId to : graph.neighbors(msg.to)) {
                if (to == msg.from) continue;
                trace.messages.push_back({msg.to, to, msg.model, hop, idx});
                next.push_back(static_cast<int>(trace.messages.size()) - 1);
            }
        }
        wave = std::move(next);
    }
    return trace;
}

ReferenceFixture make_reference_fixture(double model_size_mb, double ping_size_bytes) {
    const std::vector<std::string> labels{"A", "B", "C", "D", "E", "F", "G", "H", "I", "K"};
    WeightedGraph graph(10, labels);
    const std::pair<const char*, const char*> edges[] = {
        {"A", "H"}, {"B", "C"}, {"B", "I"}, {"C", "D"}, {"E", "F"},
        {"F", "G"}, {"F", "H"}, {"G", "K"}, {"I", "K"},
    };
    for (const auto& [a, b] : edges)
        graph.add_edge(graph.find_label(a), graph.find_label(b), 1.0);

    // Rooting the coloring at C puts C, E, G, H, I on red.
    const proto::Schedule schedule = proto::compute_schedule(
        build_adjacency(graph), model_size_mb, ping_size_bytes, graph.find_label("C"));

    std::map<NodeId, ModelRef> models;
    for (NodeId id = 0; id < graph.node_count(); ++id)
        models[id] = ModelRef{id, 0, model_size_mb};
    return {std::move(graph), schedule, std::move(models)};
}

}  // namespace gossipmesh::gossip
