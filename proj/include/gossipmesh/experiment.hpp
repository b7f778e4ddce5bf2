#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "gossipmesh/catalog.hpp"
#include "gossipmesh/sim.hpp"

namespace gossipmesh::cli {

/// Cost model and link capacities of the simulated underlay.
struct UnderlaySettings {
    int subnets = 3;
    double intra_lo_ms = 0.2;
    double intra_hi_ms = 1.0;
    double mult_lo = 10.0;
    double mult_hi = 60.0;
    double uplink_mbps = 10.0;
    double downlink_mbps = 10.0;
    double trunk_mbps = 20.0;

    nlohmann::json to_json() const;
    static UnderlaySettings from_json(const nlohmann::json& j);
};

/// Full description of one experiment. Serializable so that every emitted
/// report can embed the exact configuration that produced it.
struct ExperimentConfig {
    std::string topology = "complete";
    int n = 10;
    std::uint64_t seed = 1;
    std::vector<std::string> models = {"b3"};
    std::string mode = "both";  // gossip | flood | both
    UnderlaySettings underlay;
    double ping_size_bytes = 64.0;
    std::string slot_policy = "causal";
    int seeds_per_cell = 5;  // sweep repetitions
    std::string out_dir;     // empty: no files, stdout only
    bool dump_trace = false;

    void validate() const;
    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
    /// Load from a config file and/or override single fields; values given
    /// on the command line win over file values.
    static ExperimentConfig from_file(const std::string& path);
};

/// One (topology, model, mode, seed) measurement.
struct CellResult {
    std::string topology;
    std::string model;
    std::string mode;  // gossip | flood
    std::uint64_t seed = 0;
    sim::RoundMetrics metrics;
};

/// Splits the master seed into one independent seed per sweep cell
/// repetition. Documented rule: three chained splitmix64 steps over the
/// topology index, model index and repetition.
std::uint64_t cell_seed(std::uint64_t master, int topology_index, int model_index, int rep);

/// Everything produced while preparing one cell; exposed for tracing.
struct CellRun {
    WeightedGraph graph;
    proto::Schedule schedule;
    gossip::GossipTrace gossip_trace;
    sim::RoundMetrics gossip_metrics;
    sim::RoundMetrics flood_metrics;
};

/// Build topology + costs + schedule for one cell and simulate the requested
/// modes on the shared underlay.
CellRun run_cell(const ExperimentConfig& config, const std::string& model_code,
                 std::uint64_t seed);

/// Run the configured models/modes once at the config seed. Writes
/// results.csv (and trace files when asked) under out_dir when set.
std::vector<CellResult> run_experiment(const ExperimentConfig& config);

/// The fixed four-topology grid of a sweep, in report row order.
const std::vector<std::string>& sweep_topologies();

/// 4 topologies x catalog models x seeds_per_cell, averaged per cell.
std::vector<CellResult> sweep(const ExperimentConfig& config,
                              std::vector<std::string>* failures = nullptr);

/// CSV with the embedded config header. Column contract:
/// topology,model,mode,bandwidth_mbps,mean_transfer_s,total_round_s,messages
std::string to_csv(const ExperimentConfig& config, const std::vector<CellResult>& rows);

/// Three aligned text tables (bandwidth, mean transfer, total round time),
/// one row per topology, broadcast block then proposed block.
std::string to_tables(const std::vector<CellResult>& rows);

}  // namespace gossipmesh::cli
