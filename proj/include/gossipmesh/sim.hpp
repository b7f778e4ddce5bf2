#pragma once

#include <string>
#include <vector>

#include "gossipmesh/gossip.hpp"
#include "gossipmesh/topology.hpp"

namespace gossipmesh::sim {

enum class ResourceKind { NodeUplink, NodeDownlink, RouterTrunk };

struct Resource {
    ResourceKind kind = ResourceKind::NodeUplink;
    double capacity_mbps = 0.0;
    std::string name;
};

/// Physical layer under the overlay: per-node uplink and downlink plus one
/// trunk per router pair. A transfer's path is source uplink, then the trunk
/// between the two routers when the endpoints sit in different subnets, then
/// destination downlink.
struct UnderlayConfig {
    std::vector<int> subnet_of;  // node -> router
    double uplink_mbps = 10.0;
    double downlink_mbps = 10.0;
    double trunk_mbps = 20.0;

    static UnderlayConfig even_blocks(int n, int subnets = 3);
    void validate(int n) const;  // CapacityMisconfig on capacity <= 0
};

/// How gossip transfers map onto wall-clock time.
///  - Causal (default): a queue dispatch starts once the sender's previous
///    dispatch has drained and the model has actually arrived. The slot
///    sequence fixes the order and fan-out of every send; wall-clock release
///    follows data availability, mirroring the rule flooding gets.
///  - SelfClocked: a slot begins when the previous slot's transfers have all
///    completed; slots never overlap (a strict barrier between slots).
///  - FormulaGrid: slot i releases at (i-1) * slot seconds from the schedule;
///    a transfer that outlives its slot spills over without blocking later
///    releases, and the round lasts at least slots * slot seconds.
enum class SlotPolicy { Causal, SelfClocked, FormulaGrid };

SlotPolicy slot_policy_from_string(const std::string& name);
std::string to_string(SlotPolicy policy);

/// A completed point-to-point transfer.
struct Transfer {
    NodeId from = -1;
    NodeId to = -1;
    NodeId model_owner = -1;
    double size_mb = 0.0;
    double start_s = 0.0;
    double finish_s = 0.0;
    double delivered_mb = 0.0;  // integral of the allocated rate over time

    double duration_s() const { return finish_s - start_s; }
    double bandwidth_mbps() const;
};

/// The three per-round indicators plus the message count.
struct RoundMetrics {
    double effective_bandwidth_mbps = 0.0;  // mean of size/duration over transfers
    double mean_single_transfer_s = 0.0;
    double total_round_time_s = 0.0;
    int message_count = 0;

    friend bool operator==(const RoundMetrics&, const RoundMetrics&) = default;
};

/// Progressive-filling max-min fair allocation. `flow_paths[f]` lists the
/// resource indices flow f traverses; returns one rate per flow.
/// Deterministic: the most contended resource (lowest fair share, then
/// lowest index) saturates first, freezing its flows.
std::vector<double> allocate_rates(const std::vector<std::vector<int>>& flow_paths,
                                   const std::vector<double>& capacities);

struct SimResult {
    RoundMetrics metrics;
    std::vector<Transfer> transfers;
};

SimResult simulate_gossip(const gossip::GossipTrace& trace, const proto::Schedule& schedule,
                          const UnderlayConfig& underlay,
                          SlotPolicy policy = SlotPolicy::Causal);

SimResult simulate_flood(const gossip::FloodTrace& trace, const UnderlayConfig& underlay);

/// Per-metric ratios of the proposed (gossip) run against the broadcast
/// (flooding) baseline.
struct ComparisonReport {
    RoundMetrics proposed;
    RoundMetrics broadcast;
    double bandwidth_ratio = 0.0;      // proposed / broadcast, higher is better
    double transfer_time_ratio = 0.0;  // proposed / broadcast, lower is better
    double round_time_ratio = 0.0;     // proposed / broadcast, lower is better
    double message_ratio = 0.0;        // proposed / broadcast

    static ComparisonReport between(const RoundMetrics& proposed, const RoundMetrics& broadcast);
};

}  // namespace gossipmesh::sim
