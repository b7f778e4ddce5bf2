#include "gossipmesh/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "gossipmesh/rng.hpp"

namespace gossipmesh::cli {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string fmt3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

nlohmann::json UnderlaySettings::to_json() const {
    return {{"subnets", subnets},       {"intra_lo_ms", intra_lo_ms},
            {"intra_hi_ms", intra_hi_ms}, {"mult_lo", mult_lo},
            {"mult_hi", mult_hi},       {"uplink_mbps", uplink_mbps},
            {"downlink_mbps", downlink_mbps}, {"trunk_mbps", trunk_mbps}};
}

UnderlaySettings UnderlaySettings::from_json(const nlohmann::json& j) {
    UnderlaySettings s;
    s.subnets = j.value("subnets", s.subnets);
    s.intra_lo_ms = j.value("intra_lo_ms", s.intra_lo_ms);
    s.intra_hi_ms = j.value("intra_hi_ms", s.intra_hi_ms);
    s.mult_lo = j.value("mult_lo", s.mult_lo);
    s.mult_hi = j.value("mult_hi", s.mult_hi);
    s.uplink_mbps = j.value("uplink_mbps", s.uplink_mbps);
    s.downlink_mbps = j.value("downlink_mbps", s.downlink_mbps);
    s.trunk_mbps = j.value("trunk_mbps", s.trunk_mbps);
    return s;
}

void ExperimentConfig::validate() const {
    topo::TopologyKind::parse(topology).validate(n);
    if (n < 2) throw InvalidParamsError("experiment needs n >= 2");
    if (models.empty()) throw InvalidParamsError("experiment needs at least one model");
    for (const std::string& code : models) catalog_lookup(code);
    if (mode != "gossip" && mode != "flood" && mode != "both")
        throw InvalidParamsError("mode must be gossip, flood or both");
    if (!(ping_size_bytes > 0.0)) throw NonPositiveInputError("ping_size must be > 0");
    sim::slot_policy_from_string(slot_policy);
    if (seeds_per_cell < 1) throw InvalidParamsError("seeds_per_cell must be >= 1");
}

nlohmann::json ExperimentConfig::to_json() const {
    return {{"topology", topology},
            {"n", n},
            {"seed", seed},
            {"models", models},
            {"mode", mode},
            {"underlay", underlay.to_json()},
            {"ping_size_bytes", ping_size_bytes},
            {"slot_policy", slot_policy},
            {"seeds_per_cell", seeds_per_cell},
            {"dump_trace", dump_trace}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.topology = j.value("topology", c.topology);
    c.n = j.value("n", c.n);
    c.seed = j.value("seed", c.seed);
    if (j.contains("models")) c.models = j.at("models").get<std::vector<std::string>>();
    c.mode = j.value("mode", c.mode);
    if (j.contains("underlay")) c.underlay = UnderlaySettings::from_json(j.at("underlay"));
    c.ping_size_bytes = j.value("ping_size_bytes", c.ping_size_bytes);
    c.slot_policy = j.value("slot_policy", c.slot_policy);
    c.seeds_per_cell = j.value("seeds_per_cell", c.seeds_per_cell);
    c.dump_trace = j.value("dump_trace", c.dump_trace);
    return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParamsError("cannot read config file: " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

std::uint64_t cell_seed(std::uint64_t master, int topology_index, int model_index, int rep) {
    std::uint64_t h = master;
    h = splitmix64(h ^ (0x10000ULL + static_cast<std::uint64_t>(topology_index)));
    h = splitmix64(h ^ (0x20000ULL + static_cast<std::uint64_t>(model_index)));
    h = splitmix64(h ^ (0x30000ULL + static_cast<std::uint64_t>(rep)));
    return h;
}

CellRun run_cell(const ExperimentConfig& config, const std::string& model_code,
                 std::uint64_t seed) {
    const ModelSpec& model = catalog_lookup(model_code);
    const topo::TopologyKind kind = topo::TopologyKind::parse(config.topology);

    const WeightedGraph bare = topo::generate(kind, config.n, seed);
    topo::SubnetAssignment subnets = topo::SubnetAssignment::even_blocks(config.n, config.underlay.subnets);
    subnets.intra_lo = config.underlay.intra_lo_ms;
    subnets.intra_hi = config.underlay.intra_hi_ms;
    subnets.mult_lo = config.underlay.mult_lo;
    subnets.mult_hi = config.underlay.mult_hi;
    const WeightedGraph graph = topo::assign_costs(bare, subnets, seed);

    const proto::Schedule schedule = proto::compute_schedule(
        build_adjacency(graph), model.capacity_mb, config.ping_size_bytes, 0);

    std::map<NodeId, gossip::ModelRef> models;
    for (NodeId id = 0; id < config.n; ++id)
        models[id] = gossip::ModelRef{id, 0, model.capacity_mb};

    sim::UnderlayConfig underlay;
    underlay.subnet_of = subnets.subnet_of;
    underlay.uplink_mbps = config.underlay.uplink_mbps;
    underlay.downlink_mbps = config.underlay.downlink_mbps;
    underlay.trunk_mbps = config.underlay.trunk_mbps;

    CellRun run{graph, schedule, {}, {}, {}};
    run.gossip_trace = gossip::run_round(schedule, models);
    run.gossip_metrics =
        sim::simulate_gossip(run.gossip_trace, schedule, underlay,
                             sim::slot_policy_from_string(config.slot_policy))
            .metrics;
    run.flood_metrics = sim::simulate_flood(gossip::flood_round(graph, models), underlay).metrics;
    return run;
}

const std::vector<std::string>& sweep_topologies() {
    static const std::vector<std::string> topologies = {"er:p=0.3", "ws:k=4,beta=0.2", "ba:m=2",
                                                        "complete"};
    return topologies;
}

std::vector<CellResult> run_experiment(const ExperimentConfig& config) {
    config.validate();
    std::vector<CellResult> rows;
    std::string traces;
    for (const std::string& code : config.models) {
        const CellRun run = run_cell(config, code, config.seed);
        if (config.mode != "flood")
            rows.push_back({config.topology, code, "gossip", config.seed, run.gossip_metrics});
        if (config.mode != "gossip")
            rows.push_back({config.topology, code, "flood", config.seed, run.flood_metrics});
        if (config.dump_trace) traces += run.gossip_trace.to_jsonl(run.graph.labels());
    }
    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        std::ofstream csv(config.out_dir + "/results.csv", std::ios::binary);
        csv << to_csv(config, rows);
        if (config.dump_trace) {
            std::ofstream tf(config.out_dir + "/trace.jsonl", std::ios::binary);
            tf << traces;
        }
    }
    return rows;
}

std::vector<CellResult> sweep(const ExperimentConfig& config,
                              std::vector<std::string>* failures) {
    ExperimentConfig base = config;
    std::vector<CellResult> rows;
    const auto& topologies = sweep_topologies();
    for (std::size_t t = 0; t < topologies.size(); ++t) {
        for (std::size_t m = 0; m < model_catalog().size(); ++m) {
            const std::string code = model_catalog()[m].code;
            sim::RoundMetrics gossip_sum{}, flood_sum{};
            int ok = 0;
            for (int rep = 0; rep < config.seeds_per_cell; ++rep) {
                const std::uint64_t seed =
                    cell_seed(config.seed, static_cast<int>(t), static_cast<int>(m), rep);
                try {
                    base.topology = topologies[t];
                    const CellRun run = run_cell(base, code, seed);
                    gossip_sum.effective_bandwidth_mbps += run.gossip_metrics.effective_bandwidth_mbps;
                    gossip_sum.mean_single_transfer_s += run.gossip_metrics.mean_single_transfer_s;
                    gossip_sum.total_round_time_s += run.gossip_metrics.total_round_time_s;
                    gossip_sum.message_count += run.gossip_metrics.message_count;
                    flood_sum.effective_bandwidth_mbps += run.flood_metrics.effective_bandwidth_mbps;
                    flood_sum.mean_single_transfer_s += run.flood_metrics.mean_single_transfer_s;
                    flood_sum.total_round_time_s += run.flood_metrics.total_round_time_s;
                    flood_sum.message_count += run.flood_metrics.message_count;
                    ++ok;
                } catch (const Error& e) {
                    if (failures)
                        failures->push_back(topologies[t] + "/" + code + "/rep" +
                                            std::to_string(rep) + ": " + e.what());
                }
            }
            if (ok == 0) continue;
            auto mean = [&](const sim::RoundMetrics& sum) {
                sim::RoundMetrics m2;
                m2.effective_bandwidth_mbps = sum.effective_bandwidth_mbps / ok;
                m2.mean_single_transfer_s = sum.mean_single_transfer_s / ok;
                m2.total_round_time_s = sum.total_round_time_s / ok;
                m2.message_count = sum.message_count / ok;
                return m2;
            };
            if (config.mode != "flood")
                rows.push_back({topologies[t], code, "gossip", config.seed, mean(gossip_sum)});
            if (config.mode != "gossip")
                rows.push_back({topologies[t], code, "flood", config.seed, mean(flood_sum)});
        }
    }
    return rows;
}

std::string to_csv(const ExperimentConfig& config, const std::vector<CellResult>& rows) {
    std::ostringstream os;
    os << "# config: " << config.to_json().dump() << "\n";
    os << "topology,model,mode,bandwidth_mbps,mean_transfer_s,total_round_s,messages\n";
    for (const CellResult& r : rows) {
        os << r.topology << ',' << r.model << ',' << r.mode << ',' << fmt(r.metrics.effective_bandwidth_mbps)
           << ',' << fmt(r.metrics.mean_single_transfer_s) << ','
           << fmt(r.metrics.total_round_time_s) << ',' << r.metrics.message_count << "\n";
    }
    return os.str();
}

std::string to_tables(const std::vector<CellResult>& rows) {
    // rows keyed by (topology, model, mode)
    std::map<std::string, std::map<std::string, std::map<std::string, sim::RoundMetrics>>> grid;
    std::vector<std::string> topo_order;
    for (const CellResult& r : rows) {
        if (std::find(topo_order.begin(), topo_order.end(), r.topology) == topo_order.end())
            topo_order.push_back(r.topology);
        grid[r.topology][r.model][r.mode] = r.metrics;
    }
    std::vector<std::string> model_order;
    for (const ModelSpec& m : model_catalog()) model_order.push_back(m.code);

    struct Table {
        const char* title;
        double (*pick)(const sim::RoundMetrics&);
    };
    const Table tables[] = {
        {"Bandwidth (MB/s)", [](const sim::RoundMetrics& m) { return m.effective_bandwidth_mbps; }},
        {"Average time (s) for one transfer",
         [](const sim::RoundMetrics& m) { return m.mean_single_transfer_s; }},
        {"Average total time (s) for one communication round",
         [](const sim::RoundMetrics& m) { return m.total_round_time_s; }},
    };

    std::ostringstream os;
    for (const Table& table : tables) {
        os << table.title << "\n";
        std::vector<std::vector<std::string>> cells;
        std::vector<std::string> header{"topology"};
        for (const char* mode : {"flood", "gossip"})
            for (const std::string& code : model_order)
                header.push_back(std::string(mode) + ":" + code);
        cells.push_back(header);
        for (const std::string& topo_name : topo_order) {
            std::vector<std::string> row{
                topo::TopologyKind::parse(topo_name).family_name()};
            for (const char* mode : {"flood", "gossip"}) {
                for (const std::string& code : model_order) {
                    const auto& by_model = grid[topo_name];
                    const auto it = by_model.find(code);
                    if (it == by_model.end() || !it->second.count(mode)) {
                        row.push_back("-");
                        continue;
                    }
                    row.push_back(fmt3(table.pick(it->second.at(mode))));
                }
            }
            cells.push_back(std::move(row));
        }
        std::vector<std::size_t> width(cells.front().size(), 0);
        for (const auto& row : cells)
            for (std::size_t c = 0; c < row.size(); ++c)
                width[c] = std::max(width[c], row[c].size());
        for (const auto& row : cells) {
            for (std::size_t c = 0; c < row.size(); ++c)
                os << row[c] << std::string(width[c] - row[c].size() + (c + 1 < row.size() ? 2 : 0), ' ');
            os << "\n";
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace gossipmesh::cli
