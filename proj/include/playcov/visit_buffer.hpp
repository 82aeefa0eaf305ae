#pragma once

#include <cstdint>
#include <random>
#include <unordered_map>
#include <vector>

#include "playcov/geometry.hpp"

namespace playcov {

inline constexpr double kTau = 5.0;
inline constexpr double kRewardMax = 0.5;
inline constexpr int kMaxCounter = 500;

/// Count-annealed novelty reward: max(0, r_max * (1 - n / max_counter)).
double visit_reward(std::uint64_t n, double r_max = kRewardMax, int max_counter = kMaxCounter);

struct ObserveResult {
    int index = -1;
    bool is_new = false;
    double reward = 0.0;
};

/// Growing set of visited 3D points kept pairwise farther than tau apart, with
/// per-point visit counters, ground flags and termination counters. Nearest
/// lookups go through a uniform grid hash with cell edge tau; ties break to
/// the lowest index.
class VisitBuffer {
public:
    explicit VisitBuffer(double tau = kTau, double r_max = kRewardMax, int max_counter = kMaxCounter);

    /// Registers one visited position. Appends a new point when p is farther
    /// than tau from every stored point, otherwise increments the nearest
    /// counter (refreshing its ground flag if grounded). The reward uses the
    /// post-update counter.
    ObserveResult observe(const Vec3& p, bool grounded);

    /// Nearest stored point, or -1 when empty. Exact: matches a linear scan.
    int nearest(const Vec3& p) const;

    /// Stored point chosen among ground-flagged points with probability
    /// proportional to 1/N. Falls back to `fallback` when none qualify.
    Vec3 sample_spawn(std::mt19937_64& rng, const Vec3& fallback) const;

    /// Increments the termination counter of the point nearest to p,
    /// inserting p first when the buffer is empty.
    int record_termination(const Vec3& p);

    /// |points| / estimated_max clamped to [0, 1].
    double coverage(std::uint64_t estimated_max) const;

    std::size_t size() const { return points_.size(); }
    const std::vector<Vec3>& points() const { return points_; }
    const std::vector<std::uint64_t>& counters() const { return counters_; }
    const std::vector<bool>& ground_flags() const { return ground_flags_; }
    const std::vector<std::uint64_t>& termination_counters() const { return termination_counters_; }
    double tau() const { return tau_; }
    std::uint64_t total_observations() const { return total_observations_; }

    /// Rebuilds a buffer from exported rows (points in index order).
    void restore_point(const Vec3& p, std::uint64_t count, bool ground, std::uint64_t terminations);

private:
    struct CellKey {
        std::int64_t x, y, z;
        bool operator==(const CellKey&) const = default;
    };
    struct CellHash {
        std::size_t operator()(const CellKey& k) const;
    };

    CellKey cell_of(const Vec3& p) const;
    void scan_shell(const Vec3& p, std::int64_t radius, int& best, double& best_d2) const;
    int linear_nearest(const Vec3& p) const;
    void insert_index(int idx);

    CellKey cell_min_{0, 0, 0};
    CellKey cell_max_{0, 0, 0};
    double tau_;
    double r_max_;
    int max_counter_;
    std::vector<Vec3> points_;
    std::vector<std::uint64_t> counters_;
    std::vector<bool> ground_flags_;
    std::vector<std::uint64_t> termination_counters_;
    std::unordered_map<CellKey, std::vector<int>, CellHash> grid_;
    std::uint64_t total_observations_ = 0;
};

}  // namespace playcov
