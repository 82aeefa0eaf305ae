#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "playcov/geometry.hpp"
#include "playcov/visit_buffer.hpp"

namespace playcov {

inline constexpr double kNoveltySep = 10.0;  // 2 * tau
inline constexpr std::size_t kMaxTrajectoriesPerBoundary = 100;
inline constexpr int kTrajectorySampleStride = 25;  // 0.5 s at DT

enum class CrossDirection { Exit, Enter };

const char* to_string(CrossDirection d);

struct Boundary {
    std::string id;  // "EB" or an ROI name
    Aabb box;
};

struct BoundaryEvent {
    std::string boundary_id;
    CrossDirection direction = CrossDirection::Exit;
    Vec3 crossing_point;
    std::uint64_t episode_id = 0;
    int step_index = 0;
};

/// Segment-vs-box crossing test for one world step. Emits an exit event when
/// prev is inside and curr outside, an enter event for the reverse; the
/// crossing point is the segment-surface intersection.
std::vector<BoundaryEvent> check_crossing(const std::vector<Boundary>& boundaries,
                                          const Vec3& prev, const Vec3& curr,
                                          std::uint64_t episode_id = 0, int step_index = 0);

struct TrajectorySample {
    int step = 0;
    Vec3 position;
};

struct RecordedTrajectory {
    std::uint64_t episode_id = 0;
    BoundaryEvent event;
    std::vector<TrajectorySample> samples;  // stride-25 samples plus the crossing sample
};

/// Keeps boundary-crossing trajectories whose crossing points are pairwise
/// farther than the novelty separation, first-come, capped per boundary.
class TrajectoryRecorder {
public:
    explicit TrajectoryRecorder(double novelty_sep = kNoveltySep) : novelty_sep_(novelty_sep) {}

    /// True when no prior crossing of the same boundary and direction lies
    /// within the novelty separation.
    bool novelty_accepts(const BoundaryEvent& event) const;

    /// Applies the novelty filter and the per-boundary cap; returns whether
    /// the trajectory was kept.
    bool offer(const BoundaryEvent& event, std::vector<TrajectorySample> samples);

    const std::vector<RecordedTrajectory>& recorded() const { return recorded_; }
    double novelty_sep() const { return novelty_sep_; }

private:
    double novelty_sep_;
    std::vector<RecordedTrajectory> recorded_;
    std::map<std::pair<std::string, CrossDirection>, std::vector<Vec3>> prior_crossings_;
    std::map<std::string, std::size_t> per_boundary_count_;
};

struct OutlierPoint {
    int index = -1;
    std::uint64_t termination_count = 0;
    double score = 0.0;  // standard-score of the count
};

struct OutlierReport {
    std::vector<OutlierPoint> flagged;  // sorted by count, descending
    double mean = 0.0;
    double stddev = 0.0;
    double q1 = 0.0, median = 0.0, q3 = 0.0;
    double threshold = 0.0;  // max(5, mean + 3 * stddev)
};

/// Flags termination-count outliers: count >= max(5, mean + 3 * stddev).
/// Requires at least 10 completed episodes.
OutlierReport detect_stuck(const VisitBuffer& buffer, std::uint64_t episodes_completed);

}  // namespace playcov
