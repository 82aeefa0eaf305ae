#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "playcov/analysis_graph.hpp"
#include "playcov/diagnostics.hpp"
#include "playcov/visit_buffer.hpp"

namespace playcov {

struct CoverageRow {
    std::uint64_t steps = 0;
    std::uint64_t points = 0;
    double coverage = 0.0;
    double seconds = 0.0;  // simulated seconds: steps * DT
};

/// Stable run-directory layout shared by the run and analysis subcommands.
namespace artifact {
inline constexpr const char* kBufferFile = "buffer.tsv";
inline constexpr const char* kCoverageFile = "coverage.csv";
inline constexpr const char* kEdgesFile = "edges.txt";
inline constexpr const char* kGraphmlFile = "graph.graphml";
inline constexpr const char* kOutliersFile = "outliers.tsv";
inline constexpr const char* kCheckpointFile = "policy.ckpt";
inline constexpr const char* kRunMetaFile = "run.json";
inline constexpr const char* kTrajectoryDir = "trajectories";
inline constexpr const char* kClustersFile = "clusters.tsv";
inline constexpr const char* kSemanticMapFile = "semantic_map.txt";
}  // namespace artifact

struct RunMeta {
    std::string scenario_path;
    std::string scenario_name;
    std::string policy;
    int workers = 1;
    std::uint64_t step_budget = 0;
    std::uint64_t steps_done = 0;
    std::uint64_t seed = 0;
    std::uint64_t episodes = 0;
    std::uint64_t points = 0;
    std::uint64_t estimated_max = 0;
    double coverage = 0.0;
    double wall_seconds = 0.0;
    std::uint64_t log_interval = 0;
    std::uint64_t terminations_time_up = 0;
    std::uint64_t terminations_left_eb = 0;
    std::uint64_t terminations_frozen = 0;
};

void write_buffer_tsv(const std::string& path, const VisitBuffer& buffer);
VisitBuffer load_buffer_tsv(const std::string& path);

void write_coverage_csv(const std::string& path, const std::vector<CoverageRow>& rows);
std::vector<CoverageRow> load_coverage_csv(const std::string& path);

void write_edges_txt(const std::string& path, const ConnectivityGraph& graph);
ConnectivityGraph load_edges_txt(const std::string& path);

void write_graphml(const std::string& path, const ConnectivityGraph& graph,
                   const VisitBuffer& buffer);
void write_graph_dot(const std::string& path, const ConnectivityGraph& graph,
                     const VisitBuffer& buffer);

void write_trajectory_file(const std::string& path, const RecordedTrajectory& trajectory);
std::string trajectory_file_name(const RecordedTrajectory& trajectory);

void write_outlier_report(const std::string& path, const OutlierReport& report,
                          const VisitBuffer& buffer);
void write_insufficient_outlier_report(const std::string& path, std::uint64_t episodes);

void write_clusters_tsv(const std::string& path, const VisitBuffer& buffer,
                        const RegionLabeling& labeling);
void write_semantic_map_txt(const std::string& path, const SemanticMap& map);

void write_run_meta(const std::string& path, const RunMeta& meta);
RunMeta load_run_meta(const std::string& path);

}  // namespace playcov
