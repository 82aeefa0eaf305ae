#include "playcov/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace playcov {

const char* to_string(CrossDirection d) {
    return d == CrossDirection::Exit ? "exit" : "enter";
}

namespace {

// Intersection interval of segment prev->curr (parameter u in [0,1]) with the
// box, via slabs. Returns false when the segment misses entirely.
bool segment_box_interval(const Vec3& prev, const Vec3& curr, const Aabb& box, double& u0,
                          double& u1) {
    u0 = 0.0;
    u1 = 1.0;
    for (int a = 0; a < 3; ++a) {
        const double d = curr[a] - prev[a];
        if (d == 0.0) {
            if (prev[a] < box.min[a] || prev[a] > box.max[a]) return false;
        } else {
            double t0 = (box.min[a] - prev[a]) / d;
            double t1 = (box.max[a] - prev[a]) / d;
            if (t0 > t1) std::swap(t0, t1);
            u0 = std::max(u0, t0);
            u1 = std::min(u1, t1);
            if (u0 > u1) return false;
        }
    }
    return true;
}

}  // namespace

std::vector<BoundaryEvent> check_crossing(const std::vector<Boundary>& boundaries,
                                          const Vec3& prev, const Vec3& curr,
                                          std::uint64_t episode_id, int step_index) {
    if (!is_finite(prev) || !is_finite(curr))
        throw std::invalid_argument("check_crossing: non-finite position");
    std::vector<BoundaryEvent> events;
    for (const Boundary& b : boundaries) {
        const bool was_inside = b.box.contains(prev);
        const bool is_inside = b.box.contains(curr);
        if (was_inside == is_inside) continue;
        double u0 = 0.0, u1 = 1.0;
        Vec3 crossing = curr;
        if (segment_box_interval(prev, curr, b.box, u0, u1))
            crossing = lerp(prev, curr, was_inside ? u1 : u0);
        events.push_back({b.id, was_inside ? CrossDirection::Exit : CrossDirection::Enter, crossing,
                          episode_id, step_index});
    }
    return events;
}

bool TrajectoryRecorder::novelty_accepts(const BoundaryEvent& event) const {
    const auto it = prior_crossings_.find({event.boundary_id, event.direction});
    if (it == prior_crossings_.end()) return true;
    for (const Vec3& p : it->second)
        if (distance(p, event.crossing_point) <= novelty_sep_) return false;
    return true;
}

bool TrajectoryRecorder::offer(const BoundaryEvent& event, std::vector<TrajectorySample> samples) {
    if (!novelty_accepts(event)) return false;
    if (per_boundary_count_[event.boundary_id] >= kMaxTrajectoriesPerBoundary) return false;
    prior_crossings_[{event.boundary_id, event.direction}].push_back(event.crossing_point);
    per_boundary_count_[event.boundary_id] += 1;
    recorded_.push_back({event.episode_id, event, std::move(samples)});
    return true;
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

OutlierReport detect_stuck(const VisitBuffer& buffer, std::uint64_t episodes_completed) {
    if (buffer.size() == 0) throw std::invalid_argument("detect_stuck: empty buffer");
    if (episodes_completed < 10)
        throw std::runtime_error("detect_stuck: insufficient data (need at least 10 episodes)");

    const auto& terms = buffer.termination_counters();
    const double n = static_cast<double>(terms.size());
    double sum = 0.0;
    for (std::uint64_t t : terms) sum += static_cast<double>(t);
    const double mean = sum / n;
    double var = 0.0;
    for (std::uint64_t t : terms) {
        const double d = static_cast<double>(t) - mean;
        var += d * d;
    }
    var /= n;
    const double stddev = std::sqrt(var);

    std::vector<double> sorted(terms.begin(), terms.end());
    std::sort(sorted.begin(), sorted.end());

    OutlierReport report;
    report.mean = mean;
    report.stddev = stddev;
    report.q1 = quantile_sorted(sorted, 0.25);
    report.median = quantile_sorted(sorted, 0.5);
    report.q3 = quantile_sorted(sorted, 0.75);
    report.threshold = std::max(5.0, mean + 3.0 * stddev);

    for (std::size_t i = 0; i < terms.size(); ++i) {
        const double count = static_cast<double>(terms[i]);
        if (count >= report.threshold) {
            const double score = stddev > 0.0 ? (count - mean) / stddev : 0.0;
            report.flagged.push_back({static_cast<int>(i), terms[i], score});
        }
    }
    std::sort(report.flagged.begin(), report.flagged.end(), [](const OutlierPoint& a, const OutlierPoint& b) {
        if (a.termination_count != b.termination_count) return a.termination_count > b.termination_count;
        return a.index < b.index;
    });
    return report;
}

}  // namespace playcov
