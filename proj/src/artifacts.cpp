#include "playcov/artifacts.hpp"

#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace playcov {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return in;
}

}  // namespace

void write_buffer_tsv(const std::string& path, const VisitBuffer& buffer) {
    std::ofstream out = open_out(path);
    out << "# x\ty\tz\tvisit_count\tground_flag\ttermination_count\n";
    for (std::size_t i = 0; i < buffer.size(); ++i) {
        const Vec3& p = buffer.points()[i];
        out << fmt_double(p.x) << '\t' << fmt_double(p.y) << '\t' << fmt_double(p.z) << '\t'
            << buffer.counters()[i] << '\t' << (buffer.ground_flags()[i] ? 1 : 0) << '\t'
            << buffer.termination_counters()[i] << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

VisitBuffer load_buffer_tsv(const std::string& path) {
    std::ifstream in = open_in(path);
    VisitBuffer buffer;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        Vec3 p;
        std::uint64_t count = 0, terms = 0;
        int ground = 0;
        if (!(row >> p.x >> p.y >> p.z >> count >> ground >> terms))
            throw std::runtime_error("malformed buffer row in " + path + ": " + line);
        buffer.restore_point(p, count, ground != 0, terms);
    }
    return buffer;
}

void write_coverage_csv(const std::string& path, const std::vector<CoverageRow>& rows) {
    std::ofstream out = open_out(path);
    out << "steps,points,coverage,seconds\n";
    for (const CoverageRow& r : rows)
        out << r.steps << ',' << r.points << ',' << fmt_fixed(r.coverage, 6) << ','
            << fmt_fixed(r.seconds, 2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<CoverageRow> load_coverage_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::vector<CoverageRow> rows;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        CoverageRow r;
        if (std::sscanf(line.c_str(), "%" SCNu64 ",%" SCNu64 ",%lf,%lf", &r.steps, &r.points,
                        &r.coverage, &r.seconds) != 4)
            throw std::runtime_error("malformed coverage row in " + path + ": " + line);
        rows.push_back(r);
    }
    return rows;
}

void write_edges_txt(const std::string& path, const ConnectivityGraph& graph) {
    std::ofstream out = open_out(path);
    out << "# i j count\n";
    for (const auto& [from, to, count] : graph.edge_list())
        out << from << ' ' << to << ' ' << count << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

ConnectivityGraph load_edges_txt(const std::string& path) {
    std::ifstream in = open_in(path);
    ConnectivityGraph graph;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        int from = 0, to = 0;
        std::uint64_t count = 0;
        if (std::sscanf(line.c_str(), "%d %d %" SCNu64, &from, &to, &count) != 3)
            throw std::runtime_error("malformed edge row in " + path + ": " + line);
        graph.add_traversal(from, to, count);
    }
    return graph;
}

void write_graphml(const std::string& path, const ConnectivityGraph& graph,
                   const VisitBuffer& buffer) {
    std::ofstream out = open_out(path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"x\" for=\"node\" attr.name=\"x\" attr.type=\"double\"/>\n"
        << "  <key id=\"y\" for=\"node\" attr.name=\"y\" attr.type=\"double\"/>\n"
        << "  <key id=\"z\" for=\"node\" attr.name=\"z\" attr.type=\"double\"/>\n"
        << "  <key id=\"visits\" for=\"node\" attr.name=\"visits\" attr.type=\"long\"/>\n"
        << "  <key id=\"count\" for=\"edge\" attr.name=\"count\" attr.type=\"long\"/>\n"
        << "  <graph id=\"G\" edgedefault=\"directed\">\n";
    for (std::size_t i = 0; i < buffer.size(); ++i) {
        const Vec3& p = buffer.points()[i];
        out << "    <node id=\"n" << i << "\">"
            << "<data key=\"x\">" << fmt_double(p.x) << "</data>"
            << "<data key=\"y\">" << fmt_double(p.y) << "</data>"
            << "<data key=\"z\">" << fmt_double(p.z) << "</data>"
            << "<data key=\"visits\">" << buffer.counters()[i] << "</data>"
            << "</node>\n";
    }
    for (const auto& [from, to, count] : graph.edge_list())
        out << "    <edge source=\"n" << from << "\" target=\"n" << to << "\">"
            << "<data key=\"count\">" << count << "</data></edge>\n";
    out << "  </graph>\n</graphml>\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_graph_dot(const std::string& path, const ConnectivityGraph& graph,
                     const VisitBuffer& buffer) {
    std::ofstream out = open_out(path);
    out << "digraph G {\n";
    for (std::size_t i = 0; i < buffer.size(); ++i) {
        const Vec3& p = buffer.points()[i];
        out << "  n" << i << " [pos=\"" << fmt_double(p.x) << ',' << fmt_double(p.y) << ','
            << fmt_double(p.z) << "\"];\n";
    }
    for (const auto& [from, to, count] : graph.edge_list())
        out << "  n" << from << " -> n" << to << " [label=\"" << count << "\"];\n";
    out << "}\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string trajectory_file_name(const RecordedTrajectory& trajectory) {
    std::string id = trajectory.event.boundary_id;
    for (char& c : id)
        if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
    return "traj_" + id + "_" + to_string(trajectory.event.direction) + "_ep" +
           std::to_string(trajectory.episode_id) + ".txt";
}

void write_trajectory_file(const std::string& path, const RecordedTrajectory& trajectory) {
    std::ofstream out = open_out(path);
    const BoundaryEvent& e = trajectory.event;
    out << "# boundary: " << e.boundary_id << '\n'
        << "# direction: " << to_string(e.direction) << '\n'
        << "# episode: " << e.episode_id << '\n'
        << "# crossing: " << fmt_double(e.crossing_point.x) << ' ' << fmt_double(e.crossing_point.y)
        << ' ' << fmt_double(e.crossing_point.z) << '\n'
        << "# step x y z\n";
    for (const TrajectorySample& s : trajectory.samples)
        out << s.step << ' ' << fmt_double(s.position.x) << ' ' << fmt_double(s.position.y) << ' '
            << fmt_double(s.position.z) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_outlier_report(const std::string& path, const OutlierReport& report,
                          const VisitBuffer& buffer) {
    std::ofstream out = open_out(path);
    out << "# termination-count distribution: mean=" << fmt_double(report.mean)
        << " stddev=" << fmt_double(report.stddev) << " q1=" << fmt_double(report.q1)
        << " median=" << fmt_double(report.median) << " q3=" << fmt_double(report.q3)
        << " threshold=" << fmt_double(report.threshold) << '\n';
    out << "# index\tx\ty\tz\ttermination_count\tscore\n";
    for (const OutlierPoint& o : report.flagged) {
        const Vec3& p = buffer.points()[o.index];
        out << o.index << '\t' << fmt_double(p.x) << '\t' << fmt_double(p.y) << '\t'
            << fmt_double(p.z) << '\t' << o.termination_count << '\t' << fmt_double(o.score)
            << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_insufficient_outlier_report(const std::string& path, std::uint64_t episodes) {
    std::ofstream out = open_out(path);
    out << "# insufficient data: " << episodes << " episodes completed, need at least 10\n";
}

void write_clusters_tsv(const std::string& path, const VisitBuffer& buffer,
                        const RegionLabeling& labeling) {
    std::ofstream out = open_out(path);
    out << "# x\ty\tz\tvisit_count\tground_flag\ttermination_count\tcluster\n";
    for (std::size_t i = 0; i < buffer.size(); ++i) {
        const Vec3& p = buffer.points()[i];
        out << fmt_double(p.x) << '\t' << fmt_double(p.y) << '\t' << fmt_double(p.z) << '\t'
            << buffer.counters()[i] << '\t' << (buffer.ground_flags()[i] ? 1 : 0) << '\t'
            << buffer.termination_counters()[i] << '\t' << labeling.labels[i] << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_semantic_map_txt(const std::string& path, const SemanticMap& map) {
    std::ofstream out = open_out(path);
    out << "# from_cluster to_cluster direction traversals mean_dheight\n";
    for (const SemanticEdge& e : map.edges)
        out << e.from_cluster << ' ' << e.to_cluster << ' ' << to_string(e.tag) << ' '
            << e.traversals << ' ' << fmt_double(e.mean_dheight) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_run_meta(const std::string& path, const RunMeta& meta) {
    nlohmann::json j;
    j["scenario_path"] = meta.scenario_path;
    j["scenario_name"] = meta.scenario_name;
    j["policy"] = meta.policy;
    j["workers"] = meta.workers;
    j["step_budget"] = meta.step_budget;
    j["steps_done"] = meta.steps_done;
    j["seed"] = meta.seed;
    j["episodes"] = meta.episodes;
    j["points"] = meta.points;
    j["estimated_max"] = meta.estimated_max;
    j["coverage"] = meta.coverage;
    j["wall_seconds"] = meta.wall_seconds;
    j["log_interval"] = meta.log_interval;
    j["terminations"] = {{"time_up", meta.terminations_time_up},
                         {"left_EB", meta.terminations_left_eb},
                         {"frozen", meta.terminations_frozen}};
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

RunMeta load_run_meta(const std::string& path) {
    std::ifstream in = open_in(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed run metadata in " + path + ": " + e.what());
    }
    RunMeta meta;
    meta.scenario_path = j.value("scenario_path", "");
    meta.scenario_name = j.value("scenario_name", "");
    meta.policy = j.value("policy", "");
    meta.workers = j.value("workers", 1);
    meta.step_budget = j.value("step_budget", std::uint64_t{0});
    meta.steps_done = j.value("steps_done", std::uint64_t{0});
    meta.seed = j.value("seed", std::uint64_t{0});
    meta.episodes = j.value("episodes", std::uint64_t{0});
    meta.points = j.value("points", std::uint64_t{0});
    meta.estimated_max = j.value("estimated_max", std::uint64_t{0});
    meta.coverage = j.value("coverage", 0.0);
    meta.wall_seconds = j.value("wall_seconds", 0.0);
    meta.log_interval = j.value("log_interval", std::uint64_t{0});
    if (j.contains("terminations")) {
        meta.terminations_time_up = j["terminations"].value("time_up", std::uint64_t{0});
        meta.terminations_left_eb = j["terminations"].value("left_EB", std::uint64_t{0});
        meta.terminations_frozen = j["terminations"].value("frozen", std::uint64_t{0});
    }
    return meta;
}

}  // namespace playcov
