// gossipmesh command line: topology generation, schedule inspection,
// experiment runs, sweeps and trace dumps.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "gossipmesh/experiment.hpp"
#include "gossipmesh/rng.hpp"

using namespace gossipmesh;

namespace {

WeightedGraph load_or_generate(const std::string& in_path, const std::string& topology, int n,
                               std::uint64_t seed, const cli::UnderlaySettings& underlay,
                               bool with_costs) {
    if (!in_path.empty()) {
        std::ifstream in(in_path);
        if (!in) throw InvalidParamsError("cannot read graph file: " + in_path);
        nlohmann::json j;
        in >> j;
        return WeightedGraph::from_json(j);
    }
    const topo::TopologyKind kind = topo::TopologyKind::parse(topology);
    WeightedGraph g = topo::generate(kind, n, seed);
    if (with_costs) {
        topo::SubnetAssignment subnets = topo::SubnetAssignment::even_blocks(n, underlay.subnets);
        subnets.intra_lo = underlay.intra_lo_ms;
        subnets.intra_hi = underlay.intra_hi_ms;
        subnets.mult_lo = underlay.mult_lo;
        subnets.mult_hi = underlay.mult_hi;
        g = topo::assign_costs(g, subnets, seed);
    }
    return g;
}

void write_or_print(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw InvalidParamsError("cannot write: " + out_path);
    out << content;
}

int run_reference_replay() {
    const gossip::ReferenceFixture fx = gossip::make_reference_fixture();
    const gossip::GossipTrace trace = gossip::run_round(fx.schedule, fx.models);
    std::cout << trace.to_table(fx.graph.labels());
    const bool ok = trace.slot_count() == 23 && trace.total_transmissions() == 90;
    std::cout << "slots: " << trace.slot_count()
              << "  transmissions: " << trace.total_transmissions() << "  ("
              << (ok ? "ok" : "MISMATCH") << ")\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gossipmesh: tree-scheduled gossip vs flooding, on a simulated underlay"};
    app.require_subcommand(1);

    cli::ExperimentConfig config;
    std::string config_path;

    // shared options are registered per subcommand so that flags override
    // config-file values

    // ---- topo ----
    auto* topo_cmd = app.add_subcommand("topo", "generate or inspect a topology");
    std::string topo_in, topo_out;
    bool topo_costs = false;
    bool topo_inspect = false;
    topo_cmd->add_option("--in", topo_in, "read a graph json instead of generating");
    topo_cmd->add_option("--topology", config.topology, "topology spec (complete|er:p=|ws:k=,beta=|ba:m=)");
    topo_cmd->add_option("--n", config.n, "node count");
    topo_cmd->add_option("--seed", config.seed, "seed")->envname("GOSSIPMESH_SEED");
    topo_cmd->add_flag("--costs", topo_costs, "assign subnet-model ping costs");
    topo_cmd->add_flag("--inspect", topo_inspect, "print a summary instead of json");
    topo_cmd->add_option("--out", topo_out, "output file (default stdout)");

    // ---- schedule ----
    auto* sched_cmd = app.add_subcommand("schedule", "tree, coloring and slot for a graph");
    std::string sched_in, sched_out, sched_model = "v2";
    int sched_root = 0;
    sched_cmd->add_option("--in", sched_in, "graph json to schedule");
    sched_cmd->add_option("--topology", config.topology, "topology spec when generating");
    sched_cmd->add_option("--n", config.n, "node count");
    sched_cmd->add_option("--seed", config.seed, "seed")->envname("GOSSIPMESH_SEED");
    sched_cmd->add_option("--model", sched_model, "model code for the slot length");
    sched_cmd->add_option("--ping-size", config.ping_size_bytes, "ping payload bytes");
    sched_cmd->add_option("--root", sched_root, "root node for tree and coloring");
    sched_cmd->add_option("--out", sched_out, "output file (default stdout)");

    // ---- run ----
    auto* run_cmd = app.add_subcommand("run", "run one experiment cell");
    bool reference_replay = false;
    run_cmd->add_option("--config", config_path, "json config file");
    run_cmd->add_option("--topology", config.topology, "topology spec");
    run_cmd->add_option("--n", config.n, "node count");
    run_cmd->add_option("--seed", config.seed, "seed")->envname("GOSSIPMESH_SEED");
    run_cmd->add_option("--model", config.models, "model code(s)");
    run_cmd->add_option("--mode", config.mode, "gossip | flood | both");
    run_cmd->add_option("--slot-policy", config.slot_policy, "causal | self-clocked | grid");
    run_cmd->add_option("--ping-size", config.ping_size_bytes, "ping payload bytes");
    run_cmd->add_option("--out-dir", config.out_dir, "directory for results.csv");
    run_cmd->add_flag("--trace", config.dump_trace, "also dump the gossip trace (jsonl)");
    run_cmd->add_flag("--reference-fixture", reference_replay,
                      "replay the built-in ten-node scenario and verify 23 slots");

    // ---- sweep ----
    auto* sweep_cmd = app.add_subcommand("sweep", "full topology x model grid");
    sweep_cmd->add_option("--config", config_path, "json config file");
    sweep_cmd->add_option("--n", config.n, "node count");
    sweep_cmd->add_option("--seed", config.seed, "master seed")->envname("GOSSIPMESH_SEED");
    sweep_cmd->add_option("--seeds-per-cell", config.seeds_per_cell, "repetitions per cell");
    sweep_cmd->add_option("--mode", config.mode, "gossip | flood | both");
    sweep_cmd->add_option("--slot-policy", config.slot_policy, "causal | self-clocked | grid");
    sweep_cmd->add_option("--out-dir", config.out_dir, "directory for results.csv");

    // ---- trace ----
    auto* trace_cmd = app.add_subcommand("trace", "gossip trace for one cell");
    std::string trace_format = "table";
    std::string trace_out;
    trace_cmd->add_option("--topology", config.topology, "topology spec");
    trace_cmd->add_option("--n", config.n, "node count");
    trace_cmd->add_option("--seed", config.seed, "seed")->envname("GOSSIPMESH_SEED");
    trace_cmd->add_option("--model", config.models, "model code");
    trace_cmd->add_option("--format", trace_format, "table | jsonl");
    trace_cmd->add_option("--out", trace_out, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        // config file first, command line flags on top
        if (!config_path.empty()) {
            cli::ExperimentConfig file = cli::ExperimentConfig::from_file(config_path);
            cli::ExperimentConfig flags = config;
            const cli::ExperimentConfig defaults;
            auto pick = [](auto flag, auto file_value, auto fallback) {
                return flag != fallback ? flag : file_value;
            };
            file.topology = pick(flags.topology, file.topology, defaults.topology);
            file.n = pick(flags.n, file.n, defaults.n);
            file.seed = pick(flags.seed, file.seed, defaults.seed);
            if (flags.models != defaults.models) file.models = flags.models;
            file.mode = pick(flags.mode, file.mode, defaults.mode);
            file.slot_policy = pick(flags.slot_policy, file.slot_policy, defaults.slot_policy);
            file.ping_size_bytes = pick(flags.ping_size_bytes, file.ping_size_bytes, defaults.ping_size_bytes);
            file.seeds_per_cell = pick(flags.seeds_per_cell, file.seeds_per_cell, defaults.seeds_per_cell);
            file.out_dir = pick(flags.out_dir, file.out_dir, defaults.out_dir);
            file.dump_trace = flags.dump_trace || file.dump_trace;
            config = file;
        }

        if (topo_cmd->parsed()) {
            const WeightedGraph g = load_or_generate(topo_in, config.topology, config.n,
                                                     config.seed, config.underlay, topo_costs);
            if (topo_inspect) {
                std::ostringstream os;
                os << "nodes: " << g.node_count() << "\nedges: " << g.edge_count()
                   << "\nconnected: " << (is_connected(g) ? "yes" : "no") << "\ndegrees:";
                for (int u = 0; u < g.node_count(); ++u)
                    os << ' ' << g.label(u) << '=' << g.degree(u);
                os << "\n";
                write_or_print(topo_out, os.str());
            } else {
                write_or_print(topo_out, g.to_json().dump(2) + "\n");
            }
            return 0;
        }

        if (sched_cmd->parsed()) {
            const WeightedGraph g = load_or_generate(sched_in, config.topology, config.n,
                                                     config.seed, config.underlay, true);
            const cli::ModelSpec& model = cli::catalog_lookup(sched_model);
            const proto::Schedule s = proto::compute_schedule(
                build_adjacency(g), model.capacity_mb, config.ping_size_bytes, sched_root);
            write_or_print(sched_out, proto::schedule_message(s).dump(2) + "\n");
            return 0;
        }

        if (run_cmd->parsed()) {
            if (reference_replay) return run_reference_replay();
            config.validate();
            const auto rows = cli::run_experiment(config);
            std::cout << cli::to_csv(config, rows);
            if (config.mode == "both") {
                std::cout << "\n" << cli::to_tables(rows);
                for (const std::string& code : config.models) {
                    const sim::RoundMetrics* gossip = nullptr;
                    const sim::RoundMetrics* flood = nullptr;
                    for (const auto& r : rows) {
                        if (r.model != code) continue;
                        (r.mode == "gossip" ? gossip : flood) = &r.metrics;
                    }
                    if (!gossip || !flood) continue;
                    const auto cmp = sim::ComparisonReport::between(*gossip, *flood);
                    std::printf(
                        "%s proposed/broadcast: bandwidth x%.3f, transfer time x%.3f, "
                        "round time x%.3f, messages x%.3f\n",
                        code.c_str(), cmp.bandwidth_ratio, cmp.transfer_time_ratio,
                        cmp.round_time_ratio, cmp.message_ratio);
                }
            }
            return 0;
        }

        if (sweep_cmd->parsed()) {
            config.validate();
            std::vector<std::string> failures;
            const auto rows = cli::sweep(config, &failures);
            const std::string csv = cli::to_csv(config, rows);
            if (!config.out_dir.empty()) {
                std::filesystem::create_directories(config.out_dir);
                std::ofstream out(config.out_dir + "/results.csv", std::ios::binary);
                out << csv;
            }
            std::cout << csv << "\n" << cli::to_tables(rows);
            if (!failures.empty()) {
                std::cerr << "failed cells:\n";
                for (const std::string& f : failures) std::cerr << "  " << f << "\n";
                return 1;
            }
            return 0;
        }

        if (trace_cmd->parsed()) {
            config.validate();
            const cli::CellRun run = cli::run_cell(config, config.models.front(), config.seed);
            const std::string out = trace_format == "jsonl"
                                        ? run.gossip_trace.to_jsonl(run.graph.labels())
                                        : run.gossip_trace.to_table(run.graph.labels());
            write_or_print(trace_out, out);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
