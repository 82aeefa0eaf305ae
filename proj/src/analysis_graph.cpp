#include "playcov/analysis_graph.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace playcov {

void ConnectivityGraph::ensure_nodes(std::size_t n) {
    if (adjacency_.size() < n) adjacency_.resize(n);
}

void ConnectivityGraph::add_traversal(int from, int to, std::uint64_t count) {
    if (from == to) throw std::invalid_argument("add_traversal: self-edges are not allowed");
    if (from < 0 || to < 0) throw std::invalid_argument("add_traversal: negative node index");
    ensure_nodes(static_cast<std::size_t>(std::max(from, to)) + 1);
    adjacency_[from][to] += count;
}

std::uint64_t ConnectivityGraph::traversal_count(int from, int to) const {
    if (from < 0 || static_cast<std::size_t>(from) >= adjacency_.size()) return 0;
    const auto it = adjacency_[from].find(to);
    return it == adjacency_[from].end() ? 0 : it->second;
}

const std::map<int, std::uint64_t>& ConnectivityGraph::edges_from(int node) const {
    static const std::map<int, std::uint64_t> empty;
    if (node < 0 || static_cast<std::size_t>(node) >= adjacency_.size()) return empty;
    return adjacency_[node];
}

std::uint64_t ConnectivityGraph::total_traversals() const {
    std::uint64_t total = 0;
    for (const auto& edges : adjacency_)
        for (const auto& [to, count] : edges) total += count;
    return total;
}

std::size_t ConnectivityGraph::edge_count() const {
    std::size_t total = 0;
    for (const auto& edges : adjacency_) total += edges.size();
    return total;
}

std::vector<std::tuple<int, int, std::uint64_t>> ConnectivityGraph::edge_list() const {
    std::vector<std::tuple<int, int, std::uint64_t>> edges;
    for (std::size_t from = 0; from < adjacency_.size(); ++from)
        for (const auto& [to, count] : adjacency_[from])
            edges.emplace_back(static_cast<int>(from), to, count);
    return edges;
}

ConnectivityGraph build_graph(const std::vector<std::vector<Vec3>>& trajectories,
                              const VisitBuffer& buffer, GraphBuildStats* stats) {
    ConnectivityGraph graph(buffer.size());
    const double tau_sq = buffer.tau() * buffer.tau();
    for (const auto& trajectory : trajectories) {
        int prev = -1;
        for (const Vec3& p : trajectory) {
            const int idx = buffer.nearest(p);
            if (idx < 0) continue;
            if (stats && distance_sq(buffer.points()[idx], p) > tau_sq) stats->far_samples += 1;
            if (prev >= 0 && prev != idx) {
                graph.add_traversal(prev, idx);
                if (stats) stats->transitions += 1;
            }
            prev = idx;
        }
    }
    return graph;
}

std::optional<PathResult> shortest_path(const ConnectivityGraph& graph, const VisitBuffer& buffer,
                                        const Vec3& start, const Vec3& goal) {
    if (buffer.size() == 0) return std::nullopt;
    const int source = buffer.nearest(start);
    const int target = buffer.nearest(goal);
    const std::size_t n = std::max(graph.node_count(), buffer.size());

    if (source == target) return PathResult{{source}, 0.0};

    const auto& points = buffer.points();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<int> prev(n, -1);
    std::vector<bool> done(n, false);

    // (cost, node) min-heap; equal costs pop lowest node index first.
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[source] = 0.0;
    heap.push({0.0, source});

    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (done[u]) continue;
        done[u] = true;
        if (u == target) break;
        for (const auto& [v, count] : graph.edges_from(u)) {
            if (static_cast<std::size_t>(v) >= n) continue;
            const double cost = d + distance(points[u], points[v]);
            if (cost < dist[v] || (cost == dist[v] && prev[v] >= 0 && u < prev[v])) {
                dist[v] = cost;
                prev[v] = u;
                heap.push({cost, v});
            }
        }
    }

    if (!std::isfinite(dist[target])) return std::nullopt;

    PathResult result;
    result.cost = dist[target];
    for (int v = target; v != -1; v = prev[v]) result.nodes.push_back(v);
    std::reverse(result.nodes.begin(), result.nodes.end());
    return result;
}

RegionLabeling cluster(const VisitBuffer& buffer, double linking_radius,
                       std::size_t min_cluster_size) {
    if (!(linking_radius > buffer.tau()))
        throw std::invalid_argument("cluster: linking_radius must exceed tau");

    const auto& points = buffer.points();
    const std::size_t n = points.size();
    RegionLabeling labeling;
    labeling.labels.assign(n, kNoiseLabel);
    if (n == 0) return labeling;

    // Radius linking over a coarse grid keyed by linking_radius cells.
    const double r_sq = linking_radius * linking_radius;
    const double cell = linking_radius;
    auto cell_key = [&](const Vec3& p) {
        return std::tuple<std::int64_t, std::int64_t, std::int64_t>(
            static_cast<std::int64_t>(std::floor(p.x / cell)),
            static_cast<std::int64_t>(std::floor(p.y / cell)),
            static_cast<std::int64_t>(std::floor(p.z / cell)));
    };
    std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>, std::vector<int>> grid;
    for (std::size_t i = 0; i < n; ++i) grid[cell_key(points[i])].push_back(static_cast<int>(i));

    std::vector<int> component(n, -1);
    int component_count = 0;
    for (std::size_t seed = 0; seed < n; ++seed) {
        if (component[seed] != -1) continue;
        const int comp = component_count++;
        std::vector<int> stack{static_cast<int>(seed)};
        component[seed] = comp;
        while (!stack.empty()) {
            const int i = stack.back();
            stack.pop_back();
            const auto [cx, cy, cz] = cell_key(points[i]);
            for (std::int64_t dx = -1; dx <= 1; ++dx)
                for (std::int64_t dy = -1; dy <= 1; ++dy)
                    for (std::int64_t dz = -1; dz <= 1; ++dz) {
                        const auto it = grid.find({cx + dx, cy + dy, cz + dz});
                        if (it == grid.end()) continue;
                        for (int j : it->second) {
                            if (component[j] != -1) continue;
                            if (distance_sq(points[i], points[j]) <= r_sq) {
                                component[j] = comp;
                                stack.push_back(j);
                            }
                        }
                    }
        }
    }

    // Components in order of their smallest member index; small ones are noise.
    std::vector<std::size_t> comp_size(component_count, 0);
    for (std::size_t i = 0; i < n; ++i) comp_size[component[i]] += 1;
    std::vector<int> comp_label(component_count, kNoiseLabel);
    int next_label = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const int comp = component[i];
        if (comp_label[comp] == kNoiseLabel && comp_size[comp] >= min_cluster_size)
            comp_label[comp] = next_label++;
    }
    for (std::size_t i = 0; i < n; ++i) labeling.labels[i] = comp_label[component[i]];
    labeling.cluster_count = next_label;
    return labeling;
}

const char* to_string(EdgeDirectionTag t) {
    switch (t) {
        case EdgeDirectionTag::Upwards: return "upwards";
        case EdgeDirectionTag::Downwards: return "downwards";
        case EdgeDirectionTag::Level: return "level";
    }
    return "level";
}

SemanticMap semantic_map(const ConnectivityGraph& graph, const RegionLabeling& labeling,
                         const VisitBuffer& buffer) {
    if (labeling.labels.size() < graph.node_count())
        throw std::invalid_argument("semantic_map: labeling does not cover graph nodes");

    struct Agg {
        std::uint64_t traversals = 0;
        double dheight_sum = 0.0;
        std::uint64_t edge_count = 0;
    };
    std::map<std::pair<int, int>, Agg> byPair;

    const auto& points = buffer.points();
    for (const auto& [from, to, count] : graph.edge_list()) {
        const int cf = labeling.labels[from];
        const int ct = labeling.labels[to];
        if (cf == kNoiseLabel || ct == kNoiseLabel || cf == ct) continue;
        Agg& agg = byPair[{cf, ct}];
        agg.traversals += count;
        agg.dheight_sum += points[to].y - points[from].y;
        agg.edge_count += 1;
    }

    SemanticMap result;
    for (const auto& [pair, agg] : byPair) {
        SemanticEdge edge;
        edge.from_cluster = pair.first;
        edge.to_cluster = pair.second;
        edge.traversals = agg.traversals;
        edge.mean_dheight = agg.dheight_sum / static_cast<double>(agg.edge_count);
        edge.tag = edge.mean_dheight > kSemanticHeightThreshold    ? EdgeDirectionTag::Upwards
                   : edge.mean_dheight < -kSemanticHeightThreshold ? EdgeDirectionTag::Downwards
                                                                   : EdgeDirectionTag::Level;
        result.edges.push_back(edge);
    }
    return result;
}

}  // namespace playcov
