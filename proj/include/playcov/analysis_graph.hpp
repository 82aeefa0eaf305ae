#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "playcov/geometry.hpp"
#include "playcov/visit_buffer.hpp"

namespace playcov {

/// Directed graph over buffer point indices with traversal counts; edge cost
/// is the straight-line distance between the endpoint positions.
class ConnectivityGraph {
public:
    explicit ConnectivityGraph(std::size_t node_count = 0) : adjacency_(node_count) {}

    std::size_t node_count() const { return adjacency_.size(); }
    void ensure_nodes(std::size_t n);

    /// Adds or increments a directed edge; self-edges are rejected.
    void add_traversal(int from, int to, std::uint64_t count = 1);

    std::uint64_t traversal_count(int from, int to) const;
    const std::map<int, std::uint64_t>& edges_from(int node) const;
    std::uint64_t total_traversals() const;
    std::size_t edge_count() const;

    /// Deterministic edge list sorted by (from, to).
    std::vector<std::tuple<int, int, std::uint64_t>> edge_list() const;

private:
    std::vector<std::map<int, std::uint64_t>> adjacency_;
};

struct GraphBuildStats {
    std::uint64_t transitions = 0;       // consecutive sample pairs with distinct points
    std::uint64_t far_samples = 0;       // samples farther than tau from every point
};

/// Maps every trajectory sample to its nearest buffer point and adds one
/// traversal per consecutive pair of distinct points. The buffer is treated
/// as a frozen snapshot.
ConnectivityGraph build_graph(const std::vector<std::vector<Vec3>>& trajectories,
                              const VisitBuffer& buffer, GraphBuildStats* stats = nullptr);

struct PathResult {
    std::vector<int> nodes;  // includes both endpoints
    double cost = 0.0;
};

/// Least-cost route between the buffer points nearest to start and goal.
/// Returns nullopt when no directed path exists.
std::optional<PathResult> shortest_path(const ConnectivityGraph& graph, const VisitBuffer& buffer,
                                        const Vec3& start, const Vec3& goal);

inline constexpr int kNoiseLabel = -1;
inline constexpr double kDefaultLinkingRadius = 2.0 * kTau;
inline constexpr std::size_t kDefaultMinClusterSize = 5;

struct RegionLabeling {
    std::vector<int> labels;  // kNoiseLabel for noise
    int cluster_count = 0;
};

/// Radius-linked connected components; components smaller than
/// min_cluster_size become noise. Labels are ordered by each component's
/// smallest point index, so the partition is independent of insertion order.
RegionLabeling cluster(const VisitBuffer& buffer, double linking_radius = kDefaultLinkingRadius,
                       std::size_t min_cluster_size = kDefaultMinClusterSize);

enum class EdgeDirectionTag { Upwards, Downwards, Level };

const char* to_string(EdgeDirectionTag t);

struct SemanticEdge {
    int from_cluster = 0;
    int to_cluster = 0;
    EdgeDirectionTag tag = EdgeDirectionTag::Level;
    std::uint64_t traversals = 0;
    double mean_dheight = 0.0;
};

struct SemanticMap {
    std::vector<SemanticEdge> edges;  // sorted by (from, to)
};

inline constexpr double kSemanticHeightThreshold = 1.0;

/// Aggregates point-level edges by cluster pair (noise excluded) and tags each
/// cluster edge by the mean height change of its contributing edges.
SemanticMap semantic_map(const ConnectivityGraph& graph, const RegionLabeling& labeling,
                         const VisitBuffer& buffer);

}  // namespace playcov
