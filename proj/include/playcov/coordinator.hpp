#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "playcov/analysis_graph.hpp"
#include "playcov/artifacts.hpp"
#include "playcov/diagnostics.hpp"
#include "playcov/episode.hpp"
#include "playcov/policy.hpp"
#include "playcov/scenario.hpp"
#include "playcov/visit_buffer.hpp"

namespace playcov {

enum class PolicyKind { Random, Curiosity };

const char* to_string(PolicyKind k);
PolicyKind policy_kind_from_string(const std::string& s);

struct ExperimentConfig {
    std::string scenario_path;
    PolicyKind policy = PolicyKind::Curiosity;
    int workers = 1;
    std::uint64_t step_budget = kEpisodeSteps;
    std::uint64_t seed = 0;
    std::uint64_t log_interval = 10000;
    std::string out_dir;           // empty: keep results in memory only
    std::uint64_t estimated_max = 0;  // 0: use the scenario's estimate
};

struct ExperimentResult {
    RunMeta meta;
    std::vector<CoverageRow> coverage_log;
    VisitBuffer buffer;
    ConnectivityGraph graph;
    GraphBuildStats graph_stats;
    std::vector<RecordedTrajectory> recorded_trajectories;
    std::vector<std::vector<Vec3>> trajectories;  // stride samples per episode
    TabularPolicy policy;  // empty table for the random baseline
    bool has_outliers = false;
    OutlierReport outliers;
};

/// Runs W workers against private world instances, funneling every observe
/// and termination through one buffer owner and applying policy updates in
/// arrival order, until the step budget is consumed. Writes the artifact set
/// when the config names an output directory.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Writes the artifact files for a finished run into out_dir.
void write_artifacts(const std::string& out_dir, const ExperimentResult& result);

}  // namespace playcov
