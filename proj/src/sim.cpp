#include "gossipmesh/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace gossipmesh::sim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct PendingTransfer {
    NodeId from = -1;
    NodeId to = -1;
    NodeId model_owner = -1;
    double size_mb = 0.0;
    std::vector<int> path;
    double release_s = 0.0;  // earliest start, once all deps have finished
    std::vector<int> deps;   // transfer indices that must finish first
};

// Resource table for one underlay: uplinks, downlinks, then router trunks.
struct ResourceTable {
    std::vector<Resource> resources;
    std::vector<double> capacities;
    int n = 0;
    std::map<std::pair<int, int>, int> trunk_index;
    const UnderlayConfig* cfg = nullptr;

    explicit ResourceTable(const UnderlayConfig& underlay, int nodes) : n(nodes), cfg(&underlay) {
        underlay.validate(nodes);
        for (int i = 0; i < n; ++i)
            resources.push_back({ResourceKind::NodeUplink, underlay.uplink_mbps,
                                 "uplink-" + std::to_string(i)});
        for (int i = 0; i < n; ++i)
            resources.push_back({ResourceKind::NodeDownlink, underlay.downlink_mbps,
                                 "downlink-" + std::to_string(i)});
        int subnets = 0;
        for (const int s : underlay.subnet_of) subnets = std::max(subnets, s + 1);
        for (int a = 0; a < subnets; ++a)
            for (int b = a + 1; b < subnets; ++b) {
                trunk_index[{a, b}] = static_cast<int>(resources.size());
                resources.push_back({ResourceKind::RouterTrunk, underlay.trunk_mbps,
                                     "trunk-" + std::to_string(a) + "-" + std::to_string(b)});
            }
        for (const Resource& r : resources) capacities.push_back(r.capacity_mbps);
    }

    std::vector<int> path(NodeId from, NodeId to) const {
        std::vector<int> p{from, n + to};
        const int sa = cfg->subnet_of[static_cast<std::size_t>(from)];
        const int sb = cfg->subnet_of[static_cast<std::size_t>(to)];
        if (sa != sb) p.insert(p.begin() + 1, trunk_index.at({std::min(sa, sb), std::max(sa, sb)}));
        return p;
    }
};

// Runs one batch of transfers to completion. A transfer becomes eligible
// once all the transfers it depends on have finished and its release time
// has passed; rates are re-solved at every release or finish.
class EventLoop {
public:
    EventLoop(std::vector<PendingTransfer> transfers, const std::vector<double>& capacities)
        : pending_(std::move(transfers)), capacities_(capacities) {
        const std::size_t nt = pending_.size();
        results_.resize(nt);
        remaining_.resize(nt);
        state_.assign(nt, State::Waiting);
        dependents_.resize(nt);
        deps_left_.assign(nt, 0);
        for (std::size_t i = 0; i < nt; ++i) {
            const PendingTransfer& t = pending_[i];
            results_[i] = {t.from, t.to, t.model_owner, t.size_mb, 0.0, 0.0, 0.0};
            remaining_[i] = t.size_mb;
            deps_left_[i] = static_cast<int>(t.deps.size());
            for (const int d : t.deps)
                dependents_[static_cast<std::size_t>(d)].push_back(static_cast<int>(i));
        }
    }

    std::vector<Transfer> run() {
        double now = 0.0;
        std::vector<double> rates;
        while (true) {
            // release anything due at `now`
            bool released = false;
            for (std::size_t i = 0; i < pending_.size(); ++i) {
                if (state_[i] != State::Waiting || deps_left_[i] > 0) continue;
                if (pending_[i].release_s <= now) {
                    state_[i] = State::Active;
                    results_[i].start_s = now;
                    released = true;
                }
            }
            if (released || rates.empty()) rates = solve_rates();

            // next event: earliest projected finish or earliest future release
            double next = kInf;
            for (std::size_t i = 0; i < pending_.size(); ++i) {
                if (state_[i] == State::Active) {
                    const double r = rates[i];
                    const double finish = r == kInf ? now : now + remaining_[i] / r;
                    next = std::min(next, finish);
                } else if (state_[i] == State::Waiting && deps_left_[i] == 0) {
                    next = std::min(next, std::max(pending_[i].release_s, now));
                }
            }
            if (next == kInf) break;  // nothing active, nothing to release

            // advance clocks and deliver bytes
            const double dt = next - now;
            for (std::size_t i = 0; i < pending_.size(); ++i) {
                if (state_[i] != State::Active) continue;
                if (dt > 0.0 && std::isfinite(rates[i])) {
                    remaining_[i] -= rates[i] * dt;
                    results_[i].delivered_mb += rates[i] * dt;
                }
            }
            now = next;

            // finish flows whose projection hit `now`
            bool finished = false;
            for (std::size_t i = 0; i < pending_.size(); ++i) {
                if (state_[i] != State::Active) continue;
                const double r = rates[i];
                const double projected = r == kInf ? now : remaining_[i] <= 0.0 ? now : now + remaining_[i] / r;
                if (projected <= now) {
                    state_[i] = State::Done;
                    results_[i].finish_s = now;
                    if (r == kInf) results_[i].delivered_mb = results_[i].size_mb;
                    remaining_[i] = 0.0;
                    finished = true;
                    for (const int dep : dependents_[i]) {
                        if (--deps_left_[static_cast<std::size_t>(dep)] == 0)
                            pending_[static_cast<std::size_t>(dep)].release_s =
                                std::max(pending_[static_cast<std::size_t>(dep)].release_s, now);
                    }
                }
            }
            if (finished) rates = solve_rates();
        }
        for (std::size_t i = 0; i < pending_.size(); ++i)
            if (state_[i] != State::Done)
                throw InconsistentStateError("simulation ended with unfinished transfers");
        return results_;
    }

private:
    enum class State { Waiting, Active, Done };

    std::vector<double> solve_rates() const {
        std::vector<std::vector<int>> paths;
        std::vector<int> index;
        for (std::size_t i = 0; i < pending_.size(); ++i) {
            if (state_[i] != State::Active) continue;
            paths.push_back(pending_[i].path);
            index.push_back(static_cast<int>(i));
        }
        const std::vector<double> active = allocate_rates(paths, capacities_);
        std::vector<double> rates(pending_.size(), 0.0);
        for (std::size_t k = 0; k < index.size(); ++k)
            rates[static_cast<std::size_t>(index[k])] = active[k];
        return rates;
    }

    std::vector<PendingTransfer> pending_;
    std::vector<double> capacities_;
    std::vector<Transfer> results_;
    std::vector<double> remaining_;
    std::vector<State> state_;
    std::vector<std::vector<int>> dependents_;
    std::vector<int> deps_left_;
};

RoundMetrics metrics_from(const std::vector<Transfer>& transfers, double round_floor_s) {
    RoundMetrics m;
    m.message_count = static_cast<int>(transfers.size());
    m.total_round_time_s = round_floor_s;
    if (transfers.empty()) return m;
    double bw = 0.0, dur = 0.0;
    for (const Transfer& t : transfers) {
        bw += t.bandwidth_mbps();
        dur += t.duration_s();
        m.total_round_time_s = std::max(m.total_round_time_s, t.finish_s);
    }
    m.effective_bandwidth_mbps = bw / static_cast<double>(transfers.size());
    m.mean_single_transfer_s = dur / static_cast<double>(transfers.size());
    return m;
}

}  // namespace

double Transfer::bandwidth_mbps() const {
    const double d = duration_s();
    return d > 0.0 ? size_mb / d : kInf;
}

UnderlayConfig UnderlayConfig::even_blocks(int n, int subnets) {
    UnderlayConfig cfg;
    cfg.subnet_of = topo::SubnetAssignment::even_blocks(n, subnets).subnet_of;
    return cfg;
}

void UnderlayConfig::validate(int n) const {
    if (static_cast<int>(subnet_of.size()) != n)
        throw InvalidParamsError("underlay subnet map does not cover all nodes");
    for (const int s : subnet_of)
        if (s < 0) throw InvalidParamsError("subnet index must be non-negative");
    if (!(uplink_mbps > 0.0) || !(downlink_mbps > 0.0) || !(trunk_mbps > 0.0))
        throw CapacityMisconfigError("resource capacities must be strictly positive");
}

SlotPolicy slot_policy_from_string(const std::string& name) {
    if (name == "causal") return SlotPolicy::Causal;
    if (name == "self-clocked") return SlotPolicy::SelfClocked;
    if (name == "grid") return SlotPolicy::FormulaGrid;
    throw InvalidParamsError("unknown slot policy: " + name);
}

std::string to_string(SlotPolicy policy) {
    switch (policy) {
        case SlotPolicy::Causal: return "causal";
        case SlotPolicy::SelfClocked: return "self-clocked";
        case SlotPolicy::FormulaGrid: return "grid";
    }
    return "?";
}

std::vector<double> allocate_rates(const std::vector<std::vector<int>>& flow_paths,
                                   const std::vector<double>& capacities) {
    const std::size_t nf = flow_paths.size();
    const std::size_t nr = capacities.size();
    for (const double c : capacities)
        if (!(c > 0.0)) throw CapacityMisconfigError("resource capacity must be positive");
    std::vector<double> rate(nf, 0.0);
    std::vector<bool> frozen(nf, false);
    std::vector<double> remaining = capacities;
    std::size_t left = nf;
    while (left > 0) {
        // fair share each resource could still hand to its unfrozen flows
        std::vector<int> count(nr, 0);
        for (std::size_t f = 0; f < nf; ++f)
            if (!frozen[f])
                for (const int r : flow_paths[f]) ++count[static_cast<std::size_t>(r)];
        int bottleneck = -1;
        double share = kInf;
        for (std::size_t r = 0; r < nr; ++r) {
            if (count[r] == 0) continue;
            const double s = remaining[r] / count[r];
            if (s < share) {
                share = s;
                bottleneck = static_cast<int>(r);
            }
        }
        if (bottleneck < 0) {
            // flows with empty paths (or only infinite capacity left)
            for (std::size_t f = 0; f < nf; ++f)
                if (!frozen[f]) rate[f] = kInf;
            break;
        }
        if (share == kInf) {
            for (std::size_t f = 0; f < nf; ++f)
                if (!frozen[f]) rate[f] = kInf;
            break;
        }
        // freeze the bottleneck's flows at their fair share
        for (std::size_t f = 0; f < nf; ++f) {
            if (frozen[f]) continue;
            if (std::find(flow_paths[f].begin(), flow_paths[f].end(), bottleneck) ==
                flow_paths[f].end())
                continue;
            rate[f] = share;
            frozen[f] = true;
            --left;
            for (const int r : flow_paths[f]) remaining[static_cast<std::size_t>(r)] -= share;
        }
    }
    return rate;
}

SimResult simulate_gossip(const gossip::GossipTrace& trace, const proto::Schedule& schedule,
                          const UnderlayConfig& underlay, SlotPolicy policy) {
    int max_node = -1;
    for (const NodeId id : trace.members) max_node = std::max(max_node, id);
    const ResourceTable table(underlay, max_node + 1);
    const double slot_s = schedule.slot.seconds;

    if (policy == SlotPolicy::FormulaGrid) {
        std::vector<PendingTransfer> transfers;
        for (const auto& slot : trace.slots)
            for (const auto& tx : slot.transmissions)
                transfers.push_back({tx.from, tx.to, tx.model.owner, tx.model.size_mb,
                                     table.path(tx.from, tx.to),
                                     (static_cast<double>(slot.tick) - 1.0) * slot_s, {}});
        EventLoop loop(std::move(transfers), table.capacities);
        std::vector<Transfer> done = loop.run();
        // the round occupies the full grid even when transfers finish early
        const double grid = static_cast<double>(trace.slot_count()) * slot_s;
        return {metrics_from(done, grid), std::move(done)};
    }

    if (policy == SlotPolicy::Causal) {
        // The trace fixes what every node sends and to whom; wall-clock
        // release follows the data: a dispatch starts once the sender's
        // previous dispatch drained and the dispatched model has arrived.
        std::vector<PendingTransfer> transfers;
        std::map<std::pair<NodeId, std::pair<NodeId, int>>, int> delivery;  // (node, model) -> idx
        std::map<NodeId, std::vector<int>> last_dispatch;
        for (const auto& slot : trace.slots) {
            std::map<NodeId, std::vector<int>> dispatch_of;
            for (const auto& tx : slot.transmissions) {
                std::vector<int> deps = last_dispatch.count(tx.from) ? last_dispatch[tx.from]
                                                                     : std::vector<int>{};
                if (tx.model.owner != tx.from) {
                    const auto it = delivery.find({tx.from, tx.model.key()});
                    if (it == delivery.end())
                        throw InconsistentStateError("trace forwards a model before its arrival");
                    deps.push_back(it->second);
                }
                const int idx = static_cast<int>(transfers.size());
                transfers.push_back({tx.from, tx.to, tx.model.owner, tx.model.size_mb,
                                     table.path(tx.from, tx.to), 0.0, std::move(deps)});
                dispatch_of[tx.from].push_back(idx);
                delivery[{tx.to, tx.model.key()}] = idx;
            }
            for (auto& [node, group] : dispatch_of) last_dispatch[node] = std::move(group);
        }
        EventLoop loop(std::move(transfers), table.capacities);
        std::vector<Transfer> done = loop.run();
        return {metrics_from(done, 0.0), std::move(done)};
    }

    // self-clocked: run each slot's transfers to completion before the next
    std::vector<Transfer> all;
    double now = 0.0;
    for (const auto& slot : trace.slots) {
        if (slot.transmissions.empty()) continue;
        std::vector<PendingTransfer> transfers;
        for (const auto& tx : slot.transmissions)
            transfers.push_back({tx.from, tx.to, tx.model.owner, tx.model.size_mb,
                                 table.path(tx.from, tx.to), 0.0, {}});
        EventLoop loop(std::move(transfers), table.capacities);
        double slot_end = now;
        for (Transfer t : loop.run()) {
            t.start_s += now;
            t.finish_s += now;
            slot_end = std::max(slot_end, t.finish_s);
            all.push_back(t);
        }
        now = slot_end;
    }
    return {metrics_from(all, now), std::move(all)};
}

SimResult simulate_flood(const gossip::FloodTrace& trace, const UnderlayConfig& underlay) {
    const ResourceTable table(underlay, trace.n);
    std::vector<PendingTransfer> transfers;
    transfers.reserve(trace.messages.size());
    for (const auto& msg : trace.messages) {
        std::vector<int> deps;
        if (msg.depends_on >= 0) deps.push_back(msg.depends_on);
        transfers.push_back({msg.from, msg.to, msg.model.owner, msg.model.size_mb,
                             table.path(msg.from, msg.to), 0.0, std::move(deps)});
    }
    EventLoop loop(std::move(transfers), table.capacities);
    std::vector<Transfer> done = loop.run();
    return {metrics_from(done, 0.0), std::move(done)};
}

ComparisonReport ComparisonReport::between(const RoundMetrics& proposed,
                                           const RoundMetrics& broadcast) {
    ComparisonReport r;
    r.proposed = proposed;
    r.broadcast = broadcast;
    auto ratio = [](double a, double b) { return b == 0.0 ? kInf : a / b; };
    r.bandwidth_ratio = ratio(proposed.effective_bandwidth_mbps, broadcast.effective_bandwidth_mbps);
    r.transfer_time_ratio = ratio(proposed.mean_single_transfer_s, broadcast.mean_single_transfer_s);
    r.round_time_ratio = ratio(proposed.total_round_time_s, broadcast.total_round_time_s);
    r.message_ratio = ratio(static_cast<double>(proposed.message_count),
                            static_cast<double>(broadcast.message_count));
    return r;
}

}  // namespace gossipmesh::sim
