// playtest: scenario validation, exploration runs and run-directory analysis.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "playcov/artifacts.hpp"
#include "playcov/coordinator.hpp"
#include "playcov/scenario.hpp"

namespace fs = std::filesystem;
using namespace playcov;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

std::string default_out_dir() {
    if (const char* env = std::getenv("PLAYCOV_OUT")) return env;
    return "playcov_out";
}

bool parse_coords(const std::string& text, Vec3& out) {
    return std::sscanf(text.c_str(), "%lf,%lf,%lf", &out.x, &out.y, &out.z) == 3;
}

std::string artifact_path(const std::string& run_dir, const char* name) {
    return (fs::path(run_dir) / name).string();
}

int require_artifacts(const std::string& run_dir, std::initializer_list<const char*> names) {
    for (const char* name : names) {
        if (!fs::exists(fs::path(run_dir) / name)) {
            std::fprintf(stderr, "error: missing artifact %s in %s (run `playtest run` first)\n",
                         name, run_dir.c_str());
            return kExitUsage;
        }
    }
    return kExitOk;
}

int cmd_validate(const std::string& scenario_path) {
    Scenario scn;
    try {
        scn = load_scenario(scenario_path);
    } catch (const ScenarioError& e) {
        std::fprintf(stderr, "invalid scenario: %s\n", e.what());
        return kExitUsage;
    }
    const Vec3 eb = scn.exploration_boundary.extent();
    std::printf("scenario:   %s\n", scn.name.c_str());
    std::printf("blocks:     %zu\n", scn.blocks.size());
    std::printf("elevators:  %zu\n", scn.elevators.size());
    std::printf("rois:       %zu", scn.rois.size());
    for (const Roi& r : scn.rois) std::printf(" %s", r.name.c_str());
    std::printf("\n");
    std::printf("eb_volume:  %.1f m^3\n", eb.x * eb.y * eb.z);
    if (scn.estimated_max_points)
        std::printf("estimated_max_points: %llu\n",
                    static_cast<unsigned long long>(*scn.estimated_max_points));
    return kExitOk;
}

int cmd_run(const ExperimentConfig& config) {
    ExperimentResult result;
    try {
        result = run_experiment(config);
    } catch (const ScenarioError& e) {
        std::fprintf(stderr, "invalid scenario: %s\n", e.what());
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    const RunMeta& m = result.meta;
    std::printf("scenario=%s policy=%s workers=%d seed=%llu\n", m.scenario_name.c_str(),
                m.policy.c_str(), m.workers, static_cast<unsigned long long>(m.seed));
    std::printf("steps=%llu episodes=%llu points=%llu coverage=%.4f wall=%.1fs\n",
                static_cast<unsigned long long>(m.steps_done),
                static_cast<unsigned long long>(m.episodes),
                static_cast<unsigned long long>(m.points), m.coverage, m.wall_seconds);
    std::printf("terminations: time_up=%llu left_EB=%llu frozen=%llu\n",
                static_cast<unsigned long long>(m.terminations_time_up),
                static_cast<unsigned long long>(m.terminations_left_eb),
                static_cast<unsigned long long>(m.terminations_frozen));
    std::printf("recorded_trajectories=%zu graph_edges=%zu\n", result.recorded_trajectories.size(),
                result.graph.edge_count());
    std::printf("artifacts: %s\n", config.out_dir.c_str());
    return kExitOk;
}

int cmd_report(const std::string& run_dir) {
    if (int rc = require_artifacts(run_dir, {artifact::kCoverageFile}); rc != kExitOk) return rc;
    const auto rows = load_coverage_csv(artifact_path(run_dir, artifact::kCoverageFile));
    std::printf("%12s %8s %10s %12s\n", "steps", "points", "coverage", "sim_seconds");
    for (const CoverageRow& r : rows)
        std::printf("%12llu %8llu %10.6f %12.2f\n", static_cast<unsigned long long>(r.steps),
                    static_cast<unsigned long long>(r.points), r.coverage, r.seconds);

    const std::string curve = artifact_path(run_dir, "coverage_curve.dat");
    std::FILE* out = std::fopen(curve.c_str(), "w");
    if (!out) {
        std::fprintf(stderr, "error: cannot write %s\n", curve.c_str());
        return kExitInternal;
    }
    std::fprintf(out, "# steps points coverage sim_seconds\n");
    for (const CoverageRow& r : rows)
        std::fprintf(out, "%llu %llu %.6f %.2f\n", static_cast<unsigned long long>(r.steps),
                     static_cast<unsigned long long>(r.points), r.coverage, r.seconds);
    std::fclose(out);
    std::printf("plot-ready curve: %s\n", curve.c_str());
    return kExitOk;
}

int cmd_path(const std::string& run_dir, const std::string& from_text, const std::string& to_text) {
    Vec3 from, to;
    if (!parse_coords(from_text, from) || !parse_coords(to_text, to)) {
        std::fprintf(stderr, "error: coordinates must be x,y,z in meters\n");
        return kExitUsage;
    }
    if (int rc = require_artifacts(run_dir, {artifact::kBufferFile, artifact::kEdgesFile});
        rc != kExitOk)
        return rc;
    const VisitBuffer buffer = load_buffer_tsv(artifact_path(run_dir, artifact::kBufferFile));
    if (buffer.size() == 0) {
        std::fprintf(stderr, "error: empty buffer export\n");
        return kExitUsage;
    }
    // Endpoints farther than tau from every visited state have no buffer
    // point of their own: there is no collected data to route through.
    for (const Vec3& endpoint : {from, to}) {
        const int idx = buffer.nearest(endpoint);
        if (distance(buffer.points()[idx], endpoint) > buffer.tau()) {
            std::printf("unreachable\n");
            return kExitOk;
        }
    }
    const ConnectivityGraph graph = load_edges_txt(artifact_path(run_dir, artifact::kEdgesFile));
    const auto path = shortest_path(graph, buffer, from, to);
    if (!path) {
        std::printf("unreachable\n");
        return kExitOk;
    }
    std::printf("nodes: %zu, cost: %.3f m\n", path->nodes.size(), path->cost);
    for (int node : path->nodes) {
        const Vec3& p = buffer.points()[node];
        std::printf("  %5d  (%.2f, %.2f, %.2f)\n", node, p.x, p.y, p.z);
    }
    return kExitOk;
}

int cmd_clusters(const std::string& run_dir, double radius, std::size_t min_size) {
    if (int rc = require_artifacts(run_dir, {artifact::kBufferFile, artifact::kEdgesFile});
        rc != kExitOk)
        return rc;
    const VisitBuffer buffer = load_buffer_tsv(artifact_path(run_dir, artifact::kBufferFile));
    RegionLabeling labeling;
    try {
        labeling = cluster(buffer, radius, min_size);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    const ConnectivityGraph graph = load_edges_txt(artifact_path(run_dir, artifact::kEdgesFile));
    const SemanticMap map = semantic_map(graph, labeling, buffer);

    write_clusters_tsv(artifact_path(run_dir, artifact::kClustersFile), buffer, labeling);
    write_semantic_map_txt(artifact_path(run_dir, artifact::kSemanticMapFile), map);

    std::size_t noise = 0;
    for (int label : labeling.labels)
        if (label == kNoiseLabel) ++noise;
    std::printf("points=%zu clusters=%d noise=%zu semantic_edges=%zu\n", buffer.size(),
                labeling.cluster_count, noise, map.edges.size());
    for (const SemanticEdge& e : map.edges)
        std::printf("  cluster %d -> %d: %s (%llu traversals, mean dh %.2f m)\n", e.from_cluster,
                    e.to_cluster, to_string(e.tag), static_cast<unsigned long long>(e.traversals),
                    e.mean_dheight);
    std::printf("exports: %s, %s\n", artifact::kClustersFile, artifact::kSemanticMapFile);
    return kExitOk;
}

int cmd_stuck(const std::string& run_dir) {
    if (int rc = require_artifacts(run_dir, {artifact::kBufferFile, artifact::kRunMetaFile});
        rc != kExitOk)
        return rc;
    const VisitBuffer buffer = load_buffer_tsv(artifact_path(run_dir, artifact::kBufferFile));
    const RunMeta meta = load_run_meta(artifact_path(run_dir, artifact::kRunMetaFile));
    OutlierReport report;
    try {
        report = detect_stuck(buffer, meta.episodes);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    std::printf("termination counts: mean=%.3f stddev=%.3f q1=%.1f median=%.1f q3=%.1f\n",
                report.mean, report.stddev, report.q1, report.median, report.q3);
    std::printf("outlier threshold: %.2f\n", report.threshold);
    if (report.flagged.empty()) {
        std::printf("no stuck-spot outliers\n");
    } else {
        std::printf("%6s %10s %8s  %s\n", "index", "count", "score", "position");
        for (const OutlierPoint& o : report.flagged) {
            const Vec3& p = buffer.points()[o.index];
            std::printf("%6d %10llu %8.2f  (%.2f, %.2f, %.2f)\n", o.index,
                        static_cast<unsigned long long>(o.termination_count), o.score, p.x, p.y,
                        p.z);
        }
    }
    write_outlier_report(artifact_path(run_dir, artifact::kOutliersFile), report, buffer);
    return kExitOk;
}

int cmd_export(const std::string& run_dir, const std::string& format) {
    if (int rc = require_artifacts(run_dir, {artifact::kBufferFile, artifact::kEdgesFile});
        rc != kExitOk)
        return rc;
    const VisitBuffer buffer = load_buffer_tsv(artifact_path(run_dir, artifact::kBufferFile));
    const ConnectivityGraph graph = load_edges_txt(artifact_path(run_dir, artifact::kEdgesFile));
    if (format == "graphml") {
        write_graphml(artifact_path(run_dir, artifact::kGraphmlFile), graph, buffer);
        std::printf("wrote %s\n", artifact_path(run_dir, artifact::kGraphmlFile).c_str());
    } else if (format == "dot") {
        write_graph_dot(artifact_path(run_dir, "graph.dot"), graph, buffer);
        std::printf("wrote %s\n", artifact_path(run_dir, "graph.dot").c_str());
    } else if (format == "csv") {
        const std::string path = artifact_path(run_dir, "points.csv");
        std::FILE* out = std::fopen(path.c_str(), "w");
        if (!out) return kExitInternal;
        std::fprintf(out, "x,y,z,visit_count,ground_flag,termination_count\n");
        for (std::size_t i = 0; i < buffer.size(); ++i) {
            const Vec3& p = buffer.points()[i];
            std::fprintf(out, "%.17g,%.17g,%.17g,%llu,%d,%llu\n", p.x, p.y, p.z,
                         static_cast<unsigned long long>(buffer.counters()[i]),
                         buffer.ground_flags()[i] ? 1 : 0,
                         static_cast<unsigned long long>(buffer.termination_counters()[i]));
        }
        std::fclose(out);
        std::printf("wrote %s\n", path.c_str());
    } else {
        std::fprintf(stderr, "error: unknown export format \"%s\"\n", format.c_str());
        return kExitUsage;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curiosity-driven playtest coverage runs and analysis"};
    app.require_subcommand(1);

    std::string scenario_path, run_dir, from_text, to_text;
    std::string format = "graphml";
    double radius = kDefaultLinkingRadius;
    std::size_t min_size = kDefaultMinClusterSize;

    ExperimentConfig config;
    config.out_dir = default_out_dir();
    std::string policy_name = "curiosity";

    CLI::App* validate = app.add_subcommand("validate", "Load and check a scenario file");
    validate->add_option("scenario", scenario_path, "scenario file (.scn)")->required();

    CLI::App* run = app.add_subcommand("run", "Run an exploration experiment");
    run->add_option("scenario", config.scenario_path, "scenario file (.scn)")->required();
    run->add_option("--policy", policy_name, "random or curiosity")
        ->check(CLI::IsMember({"random", "curiosity"}));
    run->add_option("--workers", config.workers, "parallel rollout workers")
        ->check(CLI::PositiveNumber);
    run->add_option("--steps", config.step_budget, "environment step budget");
    run->add_option("--seed", config.seed, "master seed");
    run->add_option("--out", config.out_dir, "output directory (or $PLAYCOV_OUT)");
    run->add_option("--log-interval", config.log_interval, "coverage log interval in steps");
    run->add_option("--estimated-max", config.estimated_max,
                    "coverage denominator override (defaults to the scenario estimate)");

    CLI::App* report = app.add_subcommand("report", "Print the coverage curve of a finished run");
    report->add_option("run_dir", run_dir, "run output directory")->required();

    CLI::App* path = app.add_subcommand("path", "Shortest traversal between two map points");
    path->add_option("run_dir", run_dir, "run output directory")->required();
    path->add_option("--from", from_text, "start x,y,z in meters")->required();
    path->add_option("--to", to_text, "goal x,y,z in meters")->required();

    CLI::App* clusters = app.add_subcommand("clusters", "Cluster the point cloud into regions");
    clusters->add_option("run_dir", run_dir, "run output directory")->required();
    clusters->add_option("--radius", radius, "linking radius in meters (> tau)");
    clusters->add_option("--min-size", min_size, "minimum cluster size");

    CLI::App* stuck = app.add_subcommand("stuck", "Report termination-count outliers");
    stuck->add_option("run_dir", run_dir, "run output directory")->required();

    CLI::App* export_cmd = app.add_subcommand("export", "Re-export run data for external viewers");
    export_cmd->add_option("run_dir", run_dir, "run output directory")->required();
    export_cmd->add_option("--format", format, "graphml, dot or csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (validate->parsed()) return cmd_validate(scenario_path);
        if (run->parsed()) {
            config.policy = policy_kind_from_string(policy_name);
            return cmd_run(config);
        }
        if (report->parsed()) return cmd_report(run_dir);
        if (path->parsed()) return cmd_path(run_dir, from_text, to_text);
        if (clusters->parsed()) return cmd_clusters(run_dir, radius, min_size);
        if (stuck->parsed()) return cmd_stuck(run_dir);
        if (export_cmd->parsed()) return cmd_export(run_dir, format);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kExitInternal;
    }
    return kExitUsage;
}
