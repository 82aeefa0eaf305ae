#include "reachability_oracle.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <vector>

#include "playcov/visit_buffer.hpp"  // for kTau

namespace playcov::testsupport {

namespace {

constexpr double kSampleSpacing = 1.0;
constexpr double kHeadroom = 1.7;
constexpr double kJumpRise = 1.2;
constexpr double kJumpApex = 1.27;
constexpr double kHopReach = 2.5;
constexpr double kClimbReach = 0.6;
constexpr double kBoardReach = 2.5;

struct StandNode {
    int column = 0;
    double height = 0.0;  // stand height (feet)
};

struct Column {
    double x = 0.0, z = 0.0;
    std::vector<double> tops;
};

bool footprint_contains(const Aabb& box, double x, double z) {
    return x >= box.min.x && x <= box.max.x && z >= box.min.z && z <= box.max.z;
}

}  // namespace

int ReachabilityOracle::region_count(double linking_radius) const {
    const double r_cells = linking_radius / kTau;
    const std::int64_t reach = static_cast<std::int64_t>(std::ceil(r_cells));
    std::map<Cell, int> component;
    for (const Cell& c : cells) component[c] = -1;
    int count = 0;
    for (const Cell& seed : cells) {
        if (component[seed] != -1) continue;
        ++count;
        std::deque<Cell> queue{seed};
        component[seed] = count;
        while (!queue.empty()) {
            const auto [cx, cy, cz] = queue.front();
            queue.pop_front();
            for (std::int64_t dx = -reach; dx <= reach; ++dx)
                for (std::int64_t dy = -reach; dy <= reach; ++dy)
                    for (std::int64_t dz = -reach; dz <= reach; ++dz) {
                        // Link when cell centers are within the radius.
                        const double d = std::sqrt(static_cast<double>(dx * dx + dy * dy + dz * dz)) * kTau;
                        if (d > linking_radius) continue;
                        const Cell n{cx + dx, cy + dy, cz + dz};
                        const auto it = component.find(n);
                        if (it == component.end() || it->second != -1) continue;
                        it->second = count;
                        queue.push_back(n);
                    }
        }
    }
    return count;
}

ReachabilityOracle compute_reachable_cells(const Scenario& scn) {
    const Aabb& eb = scn.exploration_boundary;

    const int nx = static_cast<int>(std::floor((eb.max.x - eb.min.x) / kSampleSpacing));
    const int nz = static_cast<int>(std::floor((eb.max.z - eb.min.z) / kSampleSpacing));

    // Stand surfaces per 1 m column: block tops with headroom, inside the EB.
    std::vector<Column> columns(static_cast<std::size_t>(nx) * nz);
    auto column_at = [&](int ix, int iz) -> Column& { return columns[ix * nz + iz]; };

    auto has_headroom = [&](double x, double top, double z) {
        for (const Block& b : scn.blocks) {
            if (!b.collision_enabled || !footprint_contains(b.box, x, z)) continue;
            if (b.box.min.y < top + kHeadroom && b.box.max.y > top) return false;
        }
        return true;
    };

    for (int ix = 0; ix < nx; ++ix) {
        for (int iz = 0; iz < nz; ++iz) {
            Column& col = column_at(ix, iz);
            col.x = eb.min.x + (ix + 0.5) * kSampleSpacing;
            col.z = eb.min.z + (iz + 0.5) * kSampleSpacing;
            for (const Block& b : scn.blocks) {
                if (!b.collision_enabled || !footprint_contains(b.box, col.x, col.z)) continue;
                const double top = b.box.max.y;
                if (top < eb.min.y || top > eb.max.y) continue;
                if (has_headroom(col.x, top, col.z)) col.tops.push_back(top);
            }
        }
    }

    // BFS over stand nodes from the spawn column.
    std::map<std::pair<int, int>, bool> visited;  // (column index, top index)
    std::deque<std::pair<int, int>> queue;

    auto column_index = [&](double x, double z) {
        int ix = static_cast<int>(std::floor((x - eb.min.x) / kSampleSpacing));
        int iz = static_cast<int>(std::floor((z - eb.min.z) / kSampleSpacing));
        ix = std::clamp(ix, 0, nx - 1);
        iz = std::clamp(iz, 0, nz - 1);
        return ix * nz + iz;
    };

    ReachabilityOracle oracle;
    auto mark = [&](double x, double y, double z) {
        if (x < eb.min.x || x > eb.max.x || y < eb.min.y || y > eb.max.y || z < eb.min.z ||
            z > eb.max.z)
            return;
        oracle.cells.insert({static_cast<std::int64_t>(std::floor((x - eb.min.x) / kTau)),
                             static_cast<std::int64_t>(std::floor((y - eb.min.y) / kTau)),
                             static_cast<std::int64_t>(std::floor((z - eb.min.z) / kTau))});
    };

    auto enqueue = [&](int col, int top_idx) {
        if (visited[{col, top_idx}]) return;
        visited[{col, top_idx}] = true;
        queue.push_back({col, top_idx});
    };

    {
        const int spawn_col = column_index(scn.initial_spawn.x, scn.initial_spawn.z);
        const Column& col = columns[spawn_col];
        int best = -1;
        double best_gap = 1e300;
        for (std::size_t i = 0; i < col.tops.size(); ++i) {
            const double gap = std::abs(col.tops[i] - scn.initial_spawn.y);
            if (gap < best_gap) {
                best_gap = gap;
                best = static_cast<int>(i);
            }
        }
        if (best >= 0) enqueue(spawn_col, best);
    }

    const int reach_cols = static_cast<int>(std::ceil(kHopReach / kSampleSpacing));

    while (!queue.empty()) {
        const auto [ci, ti] = queue.front();
        queue.pop_front();
        const Column& col = columns[ci];
        const double h = col.tops[ti];

        mark(col.x, h, col.z);
        mark(col.x, h + kJumpApex, col.z);

        // Walkable, jumpable and droppable neighbors within the hop reach.
        const int ix = ci / nz, iz = ci % nz;
        for (int dx = -reach_cols; dx <= reach_cols; ++dx) {
            for (int dz = -reach_cols; dz <= reach_cols; ++dz) {
                if (dx == 0 && dz == 0) continue;
                const int jx = ix + dx, jz = iz + dz;
                if (jx < 0 || jx >= nx || jz < 0 || jz >= nz) continue;
                const Column& other = columns[jx * nz + jz];
                const double dist = std::sqrt(static_cast<double>(dx * dx + dz * dz)) * kSampleSpacing;
                if (dist > kHopReach) continue;
                for (std::size_t j = 0; j < other.tops.size(); ++j) {
                    const double oh = other.tops[j];
                    if (oh > h + kJumpRise) continue;  // too high even with a jump
                    if (!visited[{jx * nz + jz, static_cast<int>(j)}]) {
                        // Drop columns leave visited cells behind on the way down.
                        for (double y = oh; y < h; y += 1.0) mark(other.x, y, other.z);
                        enqueue(jx * nz + jz, static_cast<int>(j));
                    }
                }
            }
        }

        // Climbable faces within reach connect to the face top.
        for (const Block& b : scn.blocks) {
            if (!b.collision_enabled || b.surface_class != SurfaceClass::Climbable) continue;
            const Aabb grown = b.box.expanded(kClimbReach);
            if (!footprint_contains(grown, col.x, col.z)) continue;
            if (footprint_contains(b.box, col.x, col.z)) continue;  // on top, not beside
            const double grab_top = h + kJumpRise + kHeadroom;
            if (grab_top <= b.box.min.y || h >= b.box.max.y) continue;
            const double top = b.box.max.y;
            for (double y = std::max(h, b.box.min.y); y <= top; y += 1.0) mark(col.x, y, col.z);
            // Top out onto stands near the face top.
            for (int jx = std::max(0, ix - reach_cols); jx < std::min(nx, ix + reach_cols + 1); ++jx)
                for (int jz = std::max(0, iz - reach_cols); jz < std::min(nz, iz + reach_cols + 1);
                     ++jz) {
                    const Column& other = columns[jx * nz + jz];
                    for (std::size_t j = 0; j < other.tops.size(); ++j)
                        if (std::abs(other.tops[j] - top) <= kJumpRise)
                            enqueue(jx * nz + jz, static_cast<int>(j));
                }
        }

        // Elevators: board near the platform's lowest pose, ride the column,
        // alight near the highest pose.
        for (const Elevator& e : scn.elevators) {
            const double half_height = (e.platform.max.y - e.platform.min.y) * 0.5;
            double lo = 1e300, hi = -1e300;
            Vec3 lo_center, hi_center;
            for (const Vec3& w : e.waypoints) {
                if (w.y < lo) {
                    lo = w.y;
                    lo_center = w;
                }
                if (w.y > hi) {
                    hi = w.y;
                    hi_center = w;
                }
            }
            const double board_top = lo + half_height;
            const double alight_top = hi + half_height;
            const double dxz = std::hypot(col.x - lo_center.x, col.z - lo_center.z);
            if (dxz > kBoardReach || std::abs(h - board_top) > kJumpRise) continue;
            for (double y = board_top; y <= alight_top; y += 1.0) mark(lo_center.x, y, lo_center.z);
            for (int jx = 0; jx < nx; ++jx)
                for (int jz = 0; jz < nz; ++jz) {
                    const Column& other = columns[jx * nz + jz];
                    if (std::hypot(other.x - hi_center.x, other.z - hi_center.z) > kBoardReach)
                        continue;
                    for (std::size_t j = 0; j < other.tops.size(); ++j)
                        if (std::abs(other.tops[j] - alight_top) <= kJumpRise)
                            enqueue(jx * nz + jz, static_cast<int>(j));
                }
        }
    }

    return oracle;
}

}  // namespace playcov::testsupport
