#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "playcov/diagnostics.hpp"
#include "playcov/policy.hpp"
#include "playcov/visit_buffer.hpp"
#include "playcov/world.hpp"

namespace playcov {

enum class TerminationCause { TimeUp, LeftEb, Frozen };

const char* to_string(TerminationCause c);

struct CrossingCandidate {
    BoundaryEvent event;
    std::vector<TrajectorySample> samples;  // stride samples up to the event plus the crossing
};

struct EpisodeResult {
    std::uint64_t episode_id = 0;
    std::vector<TrajectorySample> trajectory;  // one sample per step, plus the spawn
    std::vector<Vec3> stride_trajectory;       // every sample_stride steps, plus the last step
    std::vector<Transition> transitions;
    double total_reward = 0.0;
    TerminationCause cause = TerminationCause::TimeUp;
    Vec3 final_position;
    int steps = 0;
    std::vector<CrossingCandidate> crossing_candidates;
};

/// Buffer seam for the runner: the coordinator routes these calls through its
/// single-writer owner, tests may bind a buffer directly.
class VisitAccess {
public:
    virtual ~VisitAccess() = default;
    virtual ObserveResult observe(const Vec3& p, bool grounded, bool counts_step) = 0;
    virtual Vec3 sample_spawn(std::mt19937_64& rng, const Vec3& fallback) = 0;
    virtual void record_termination(const Vec3& p) = 0;
};

class DirectVisitAccess final : public VisitAccess {
public:
    explicit DirectVisitAccess(VisitBuffer& buffer) : buffer_(buffer) {}
    ObserveResult observe(const Vec3& p, bool grounded, bool) override {
        return buffer_.observe(p, grounded);
    }
    Vec3 sample_spawn(std::mt19937_64& rng, const Vec3& fallback) override {
        return buffer_.sample_spawn(rng, fallback);
    }
    void record_termination(const Vec3& p) override { buffer_.record_termination(p); }

private:
    VisitBuffer& buffer_;
};

struct EpisodeOptions {
    int max_steps = kEpisodeSteps;
    int sample_stride = kTrajectorySampleStride;
    // Spawn heading; drawn uniformly from the episode stream when absent.
    std::optional<double> initial_heading;
    // Spawn position override for scripted replays; sampled from the buffer
    // when absent.
    std::optional<Vec3> initial_position;
};

/// Runs one episode: spawn from the buffer, then loop state-key -> act ->
/// world step -> observe (reward) until time-up, EB exit or freeze. Records a
/// termination at the final position. Transitions are returned for the caller
/// to apply; the policy itself is not mutated.
EpisodeResult run_episode(const Scenario& scn, Policy& policy, VisitAccess& access,
                          std::mt19937_64& rng, const EpisodeOptions& opts = {},
                          std::uint64_t episode_id = 0);

/// Boundaries watched during an episode: the EB plus every ROI.
std::vector<Boundary> scenario_boundaries(const Scenario& scn);

}  // namespace playcov
