#include "playcov/coordinator.hpp"

#include <chrono>
#include <filesystem>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "playcov/rng.hpp"

namespace playcov {

const char* to_string(PolicyKind k) { return k == PolicyKind::Random ? "random" : "curiosity"; }

PolicyKind policy_kind_from_string(const std::string& s) {
    if (s == "random") return PolicyKind::Random;
    if (s == "curiosity") return PolicyKind::Curiosity;
    throw std::invalid_argument("unknown policy kind \"" + s + "\" (expected random or curiosity)");
}

namespace {

// Single-writer owner of the buffer and run counters; every worker call lands
// here under one lock.
class CentralState final : public VisitAccess {
public:
    CentralState(const ExperimentConfig& config, std::uint64_t estimated_max)
        : config_(config), estimated_max_(estimated_max) {}

    ObserveResult observe(const Vec3& p, bool grounded, bool counts_step) override {
        std::lock_guard<std::mutex> lock(mutex_);
        const ObserveResult r = buffer_.observe(p, grounded);
        if (counts_step) {
            ++steps_;
            if (config_.log_interval > 0 && steps_ % config_.log_interval == 0) append_row();
        }
        return r;
    }

    Vec3 sample_spawn(std::mt19937_64& rng, const Vec3& fallback) override {
        std::lock_guard<std::mutex> lock(mutex_);
        return buffer_.sample_spawn(rng, fallback);
    }

    void record_termination(const Vec3& p) override {
        std::lock_guard<std::mutex> lock(mutex_);
        buffer_.record_termination(p);
    }

    // Claims the next episode, or returns false once the budget is consumed.
    bool claim_episode(std::uint64_t& episode_id, TabularPolicy& snapshot, bool curiosity) {
        std::lock_guard<std::mutex> lock(mutex_);
        if (failed_ || steps_ >= config_.step_budget) return false;
        episode_id = next_episode_++;
        if (curiosity) {
            snapshot = policy_;
            snapshot.set_epsilon(epsilon_schedule(steps_, config_.step_budget));
        }
        return true;
    }

    void commit_episode(const EpisodeResult& result, bool curiosity) {
        std::lock_guard<std::mutex> lock(mutex_);
        ++episodes_;
        switch (result.cause) {
            case TerminationCause::TimeUp: ++time_up_; break;
            case TerminationCause::LeftEb: ++left_eb_; break;
            case TerminationCause::Frozen: ++frozen_; break;
        }
        if (curiosity) policy_.apply(result.transitions);
        for (const CrossingCandidate& c : result.crossing_candidates)
            recorder_.offer(c.event, c.samples);
        trajectories_.push_back(result.stride_trajectory);
    }

    void fail(const std::string& message) {
        std::lock_guard<std::mutex> lock(mutex_);
        if (!failed_) {
            failed_ = true;
            failure_ = message;
        }
    }

    void finish() {
        std::lock_guard<std::mutex> lock(mutex_);
        if (failed_) throw std::runtime_error("worker failed: " + failure_);
        if (coverage_log_.empty() || coverage_log_.back().steps != steps_) append_row();
    }

    // Post-join accessors; workers are gone by the time these run.
    VisitBuffer& buffer() { return buffer_; }
    TabularPolicy& policy() { return policy_; }
    TrajectoryRecorder& recorder() { return recorder_; }
    const std::vector<std::vector<Vec3>>& trajectories() const { return trajectories_; }
    const std::vector<CoverageRow>& coverage_log() const { return coverage_log_; }
    std::uint64_t steps() const { return steps_; }
    std::uint64_t episodes() const { return episodes_; }
    std::uint64_t time_up() const { return time_up_; }
    std::uint64_t left_eb() const { return left_eb_; }
    std::uint64_t frozen() const { return frozen_; }

private:
    void append_row() {
        CoverageRow row;
        row.steps = steps_;
        row.points = buffer_.size();
        row.coverage = estimated_max_ > 0 ? buffer_.coverage(estimated_max_) : 0.0;
        row.seconds = static_cast<double>(steps_) * kDt;
        coverage_log_.push_back(row);
    }

    const ExperimentConfig& config_;
    std::uint64_t estimated_max_;
    std::mutex mutex_;
    VisitBuffer buffer_;
    TabularPolicy policy_;
    TrajectoryRecorder recorder_;
    std::vector<std::vector<Vec3>> trajectories_;
    std::vector<CoverageRow> coverage_log_;
    std::uint64_t steps_ = 0;
    std::uint64_t episodes_ = 0;
    std::uint64_t next_episode_ = 0;
    std::uint64_t time_up_ = 0;
    std::uint64_t left_eb_ = 0;
    std::uint64_t frozen_ = 0;
    bool failed_ = false;
    std::string failure_;
};

void worker_loop(const Scenario& scn, const ExperimentConfig& config, CentralState& central) {
    const bool curiosity = config.policy == PolicyKind::Curiosity;
    RandomPolicy random_policy;
    TabularPolicy snapshot;
    try {
        std::uint64_t episode_id = 0;
        while (central.claim_episode(episode_id, snapshot, curiosity)) {
            std::mt19937_64 rng = make_stream_rng(config.seed, episode_id);
            Policy& policy = curiosity ? static_cast<Policy&>(snapshot)
                                       : static_cast<Policy&>(random_policy);
            const EpisodeResult result =
                run_episode(scn, policy, central, rng, EpisodeOptions{}, episode_id);
            central.commit_episode(result, curiosity);
        }
    } catch (const std::exception& e) {
        central.fail(e.what());
    }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    if (config.workers < 1) throw std::invalid_argument("run_experiment: workers must be >= 1");
    if (config.step_budget < static_cast<std::uint64_t>(kEpisodeSteps))
        throw std::invalid_argument("run_experiment: step budget below one episode (3000)");

    const Scenario scn = load_scenario(config.scenario_path);
    const std::uint64_t estimated_max =
        config.estimated_max > 0 ? config.estimated_max : scn.estimated_max_points.value_or(0);

    const auto wall_start = std::chrono::steady_clock::now();
    CentralState central(config, estimated_max);

    {
        std::vector<std::thread> workers;
        workers.reserve(config.workers);
        for (int w = 0; w < config.workers; ++w)
            workers.emplace_back(worker_loop, std::cref(scn), std::cref(config), std::ref(central));
        for (std::thread& t : workers) t.join();
    }
    central.finish();

    ExperimentResult result;
    result.buffer = central.buffer();
    result.trajectories = central.trajectories();
    result.graph = build_graph(result.trajectories, result.buffer, &result.graph_stats);
    result.recorded_trajectories = central.recorder().recorded();
    result.coverage_log = central.coverage_log();
    result.policy = central.policy();

    if (central.episodes() >= 10) {
        result.outliers = detect_stuck(result.buffer, central.episodes());
        result.has_outliers = true;
    }

    const double wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

    RunMeta& meta = result.meta;
    meta.scenario_path = config.scenario_path;
    meta.scenario_name = scn.name;
    meta.policy = to_string(config.policy);
    meta.workers = config.workers;
    meta.step_budget = config.step_budget;
    meta.steps_done = central.steps();
    meta.seed = config.seed;
    meta.episodes = central.episodes();
    meta.points = result.buffer.size();
    meta.estimated_max = estimated_max;
    meta.coverage = estimated_max > 0 ? result.buffer.coverage(estimated_max) : 0.0;
    meta.wall_seconds = wall_seconds;
    meta.log_interval = config.log_interval;
    meta.terminations_time_up = central.time_up();
    meta.terminations_left_eb = central.left_eb();
    meta.terminations_frozen = central.frozen();

    if (!config.out_dir.empty()) write_artifacts(config.out_dir, result);
    return result;
}

void write_artifacts(const std::string& out_dir, const ExperimentResult& result) {
    namespace fs = std::filesystem;
    const fs::path dir(out_dir);
    fs::create_directories(dir / artifact::kTrajectoryDir);

    write_buffer_tsv((dir / artifact::kBufferFile).string(), result.buffer);
    write_coverage_csv((dir / artifact::kCoverageFile).string(), result.coverage_log);
    write_edges_txt((dir / artifact::kEdgesFile).string(), result.graph);
    write_graphml((dir / artifact::kGraphmlFile).string(), result.graph, result.buffer);
    write_run_meta((dir / artifact::kRunMetaFile).string(), result.meta);

    if (result.meta.policy == to_string(PolicyKind::Curiosity))
        result.policy.save((dir / artifact::kCheckpointFile).string());
    else
        save_random_policy_checkpoint((dir / artifact::kCheckpointFile).string());

    if (result.has_outliers)
        write_outlier_report((dir / artifact::kOutliersFile).string(), result.outliers,
                             result.buffer);
    else
        write_insufficient_outlier_report((dir / artifact::kOutliersFile).string(),
                                          result.meta.episodes);

    for (const RecordedTrajectory& t : result.recorded_trajectories)
        write_trajectory_file((dir / artifact::kTrajectoryDir / trajectory_file_name(t)).string(),
                              t);
}

}  // namespace playcov
