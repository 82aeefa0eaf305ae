#include "playcov/visit_buffer.hpp"

#include <limits>
#include <stdexcept>

namespace playcov {

double visit_reward(std::uint64_t n, double r_max, int max_counter) {
    if (n < 1) throw std::invalid_argument("visit_reward: counter must be >= 1");
    const double r = r_max * (1.0 - static_cast<double>(n) / max_counter);
    return r > 0.0 ? r : 0.0;
}

VisitBuffer::VisitBuffer(double tau, double r_max, int max_counter)
    : tau_(tau), r_max_(r_max), max_counter_(max_counter) {
    if (!(tau > 0.0)) throw std::invalid_argument("VisitBuffer: tau must be positive");
}

std::size_t VisitBuffer::CellHash::operator()(const CellKey& k) const {
    // splitmix-style avalanche over the packed coordinates
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(k.y) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(k.z) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
}

VisitBuffer::CellKey VisitBuffer::cell_of(const Vec3& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x / tau_)),
            static_cast<std::int64_t>(std::floor(p.y / tau_)),
            static_cast<std::int64_t>(std::floor(p.z / tau_))};
}

void VisitBuffer::insert_index(int idx) {
    const CellKey c = cell_of(points_[idx]);
    grid_[c].push_back(idx);
    if (points_.size() == 1) {
        cell_min_ = c;
        cell_max_ = c;
    } else {
        cell_min_ = {std::min(cell_min_.x, c.x), std::min(cell_min_.y, c.y), std::min(cell_min_.z, c.z)};
        cell_max_ = {std::max(cell_max_.x, c.x), std::max(cell_max_.y, c.y), std::max(cell_max_.z, c.z)};
    }
}

// Scans the cubic shell at the given Chebyshev radius around p's cell, keeping
// the (distance, index)-lexicographic minimum.
void VisitBuffer::scan_shell(const Vec3& p, std::int64_t radius, int& best, double& best_d2) const {
    const CellKey c = cell_of(p);
    auto visit_cell = [&](std::int64_t dx, std::int64_t dy, std::int64_t dz) {
        const auto it = grid_.find({c.x + dx, c.y + dy, c.z + dz});
        if (it == grid_.end()) return;
        for (int idx : it->second) {
            const double d2 = distance_sq(points_[idx], p);
            if (d2 < best_d2 || (d2 == best_d2 && (best < 0 || idx < best))) {
                best_d2 = d2;
                best = idx;
            }
        }
    };
    if (radius == 0) {
        visit_cell(0, 0, 0);
        return;
    }
    for (std::int64_t dx = -radius; dx <= radius; ++dx)
        for (std::int64_t dy = -radius; dy <= radius; ++dy)
            for (std::int64_t dz = -radius; dz <= radius; ++dz)
                if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) == radius)
                    visit_cell(dx, dy, dz);
}

int VisitBuffer::linear_nearest(const Vec3& p) const {
    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(points_.size()); ++i) {
        const double d2 = distance_sq(points_[i], p);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    return best;
}

int VisitBuffer::nearest(const Vec3& p) const {
    if (points_.empty()) return -1;
    const CellKey c = cell_of(p);
    // No occupied cell lies beyond this Chebyshev radius.
    const std::int64_t r_cap = std::max(
        {std::max(std::abs(c.x - cell_min_.x), std::abs(c.x - cell_max_.x)),
         std::max(std::abs(c.y - cell_min_.y), std::abs(c.y - cell_max_.y)),
         std::max(std::abs(c.z - cell_min_.z), std::abs(c.z - cell_max_.z))});

    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::int64_t r = 0;; ++r) {
        const std::int64_t side = 2 * r + 1;
        if (side * side * side > 27 * static_cast<std::int64_t>(points_.size()) + 64)
            return linear_nearest(p);  // sweep outgrew a straight scan
        scan_shell(p, r, best, best_d2);
        // A point at distance d can live in a cell at Chebyshev offset at most
        // floor(d / tau) + 1; scanning through that shell covers exact ties.
        std::int64_t needed = r_cap;
        if (best >= 0)
            needed = std::min(r_cap,
                              static_cast<std::int64_t>(std::floor(std::sqrt(best_d2) / tau_)) + 1);
        if (r >= needed) break;
    }
    return best;
}

ObserveResult VisitBuffer::observe(const Vec3& p, bool grounded) {
    if (!is_finite(p)) throw std::invalid_argument("observe: non-finite position");
    ++total_observations_;

    // Any stored point within tau of p lies in the 27-cell neighborhood.
    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    scan_shell(p, 0, best, best_d2);
    scan_shell(p, 1, best, best_d2);

    if (best >= 0 && best_d2 <= tau_ * tau_) {
        counters_[best] += 1;
        if (grounded) ground_flags_[best] = true;
        return {best, false, visit_reward(counters_[best], r_max_, max_counter_)};
    }

    const int idx = static_cast<int>(points_.size());
    points_.push_back(p);
    counters_.push_back(1);
    ground_flags_.push_back(grounded);
    termination_counters_.push_back(0);
    insert_index(idx);
    return {idx, true, visit_reward(1, r_max_, max_counter_)};
}

Vec3 VisitBuffer::sample_spawn(std::mt19937_64& rng, const Vec3& fallback) const {
    double total = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i)
        if (ground_flags_[i]) total += 1.0 / static_cast<double>(counters_[i]);
    if (total <= 0.0) return fallback;

    std::uniform_real_distribution<double> dist(0.0, total);
    const double u = dist(rng);
    double acc = 0.0;
    int last_ground = -1;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!ground_flags_[i]) continue;
        last_ground = static_cast<int>(i);
        acc += 1.0 / static_cast<double>(counters_[i]);
        if (u < acc) return points_[i];
    }
    return points_[last_ground];  // u landed on the accumulated rounding tail
}

int VisitBuffer::record_termination(const Vec3& p) {
    int idx;
    if (points_.empty())
        idx = observe(p, false).index;
    else
        idx = nearest(p);
    termination_counters_[idx] += 1;
    return idx;
}

double VisitBuffer::coverage(std::uint64_t estimated_max) const {
    if (estimated_max == 0) throw std::invalid_argument("coverage: estimated_max must be positive");
    const double f = static_cast<double>(points_.size()) / static_cast<double>(estimated_max);
    return std::clamp(f, 0.0, 1.0);
}

void VisitBuffer::restore_point(const Vec3& p, std::uint64_t count, bool ground,
                                std::uint64_t terminations) {
    if (count < 1) throw std::invalid_argument("restore_point: counter must be >= 1");
    const int idx = static_cast<int>(points_.size());
    points_.push_back(p);
    counters_.push_back(count);
    ground_flags_.push_back(ground);
    termination_counters_.push_back(terminations);
    insert_index(idx);
    total_observations_ += count;
}

}  // namespace playcov
