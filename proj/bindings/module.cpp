#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>

#include "playcov/artifacts.hpp"
#include "playcov/coordinator.hpp"
#include "playcov/observation.hpp"
#include "playcov/rng.hpp"

namespace py = pybind11;
using namespace playcov;

namespace {

using PyVec = std::array<double, 3>;

Vec3 to_vec(const PyVec& v) { return {v[0], v[1], v[2]}; }
PyVec from_vec(const Vec3& v) { return {v.x, v.y, v.z}; }

/// Seedable generator handle so python callers can reproduce draws.
struct Rng {
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : gen(make_stream_rng(seed, stream)) {}
    std::mt19937_64 gen;
};

py::dict meta_to_dict(const RunMeta& m) {
    py::dict d;
    d["scenario_name"] = m.scenario_name;
    d["policy"] = m.policy;
    d["workers"] = m.workers;
    d["step_budget"] = m.step_budget;
    d["steps_done"] = m.steps_done;
    d["seed"] = m.seed;
    d["episodes"] = m.episodes;
    d["points"] = m.points;
    d["estimated_max"] = m.estimated_max;
    d["coverage"] = m.coverage;
    d["wall_seconds"] = m.wall_seconds;
    d["terminations"] =
        py::dict(py::arg("time_up") = m.terminations_time_up,
                 py::arg("left_EB") = m.terminations_left_eb,
                 py::arg("frozen") = m.terminations_frozen);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Curiosity-driven playtest coverage: sandbox, visit buffer, rollouts and analysis";

    m.attr("DT") = kDt;
    m.attr("GRAVITY") = kGravity;
    m.attr("WALK_SPEED") = kWalkSpeed;
    m.attr("TURN_RATE") = kTurnRate;
    m.attr("JUMP_SPEED") = kJumpSpeed;
    m.attr("JUMP_COOLDOWN_MAX") = kJumpCooldownMax;
    m.attr("CLIMB_SPEED") = kClimbSpeed;
    m.attr("EPISODE_STEPS") = kEpisodeSteps;
    m.attr("TAU") = kTau;
    m.attr("REWARD_MAX") = kRewardMax;
    m.attr("MAX_COUNTER") = kMaxCounter;
    m.attr("OBSERVATION_SIZE") = kObservationSize;
    m.attr("RAY_COUNT") = kRayCount;
    m.attr("RAY_MAX") = kRayMax;
    m.attr("ACTION_COUNT") = kActionCount;
    m.attr("NOVELTY_SEP") = kNoveltySep;

    py::register_exception<ScenarioError>(m, "ScenarioError");

    py::class_<Scenario>(m, "Scenario")
        .def_static("load", &load_scenario, py::arg("path"))
        .def_static("parse", &parse_scenario, py::arg("document"))
        .def_property_readonly("name", [](const Scenario& s) { return s.name; })
        .def_property_readonly("block_count", [](const Scenario& s) { return s.blocks.size(); })
        .def_property_readonly("elevator_count",
                               [](const Scenario& s) { return s.elevators.size(); })
        .def_property_readonly("roi_names",
                               [](const Scenario& s) {
                                   std::vector<std::string> names;
                                   for (const Roi& r : s.rois) names.push_back(r.name);
                                   return names;
                               })
        .def_property_readonly("initial_spawn",
                               [](const Scenario& s) { return from_vec(s.initial_spawn); })
        .def_property_readonly("bounds_min", [](const Scenario& s) { return from_vec(s.bounds.min); })
        .def_property_readonly("bounds_max", [](const Scenario& s) { return from_vec(s.bounds.max); })
        .def_property_readonly(
            "exploration_boundary_min",
            [](const Scenario& s) { return from_vec(s.exploration_boundary.min); })
        .def_property_readonly(
            "exploration_boundary_max",
            [](const Scenario& s) { return from_vec(s.exploration_boundary.max); })
        .def_property_readonly("estimated_max_points",
                               [](const Scenario& s) -> py::object {
                                   if (s.estimated_max_points) return py::cast(*s.estimated_max_points);
                                   return py::none();
                               })
        .def("to_document", &scenario_to_document)
        .def("__repr__", [](const Scenario& s) {
            return "<Scenario '" + s.name + "', " + std::to_string(s.blocks.size()) + " blocks>";
        });

    py::class_<CharacterState>(m, "CharacterState")
        .def(py::init<>())
        .def_property(
            "position", [](const CharacterState& s) { return from_vec(s.position); },
            [](CharacterState& s, const PyVec& v) { s.position = to_vec(v); })
        .def_property(
            "velocity", [](const CharacterState& s) { return from_vec(s.velocity); },
            [](CharacterState& s, const PyVec& v) { s.velocity = to_vec(v); })
        .def_readwrite("heading", &CharacterState::heading)
        .def_readwrite("is_climbing", &CharacterState::is_climbing)
        .def_readwrite("ground_contact", &CharacterState::ground_contact)
        .def_readwrite("jump_cooldown", &CharacterState::jump_cooldown)
        .def_readwrite("frozen", &CharacterState::frozen);

    py::class_<ActionCommand>(m, "ActionCommand")
        .def(py::init([](double forward, double turn, double strafe, bool jump) {
                 ActionCommand cmd;
                 cmd.forward = forward;
                 cmd.turn = turn;
                 cmd.strafe = strafe;
                 cmd.jump = jump;
                 return cmd;
             }),
             py::arg("forward") = 0.0, py::arg("turn") = 0.0, py::arg("strafe") = 0.0,
             py::arg("jump") = false)
        .def_readwrite("forward", &ActionCommand::forward)
        .def_readwrite("turn", &ActionCommand::turn)
        .def_readwrite("strafe", &ActionCommand::strafe)
        .def_readwrite("jump", &ActionCommand::jump);

    m.def("step", &step, py::arg("scenario"), py::arg("state"), py::arg("action"), py::arg("t"));
    m.def(
        "raycast",
        [](const Scenario& scn, const PyVec& origin, const PyVec& direction, double max_len,
           double t) {
            const RaycastHit hit = raycast(scn, to_vec(origin), to_vec(direction), max_len, t);
            return py::make_tuple(hit.distance, std::string(to_string(hit.hit)));
        },
        py::arg("scenario"), py::arg("origin"), py::arg("direction"), py::arg("max_len"),
        py::arg("t") = 0.0);
    m.def(
        "build_observation",
        [](const Scenario& scn, const CharacterState& state, double t) {
            const Observation obs = build_observation(scn, state, t);
            return std::vector<double>(obs.begin(), obs.end());
        },
        py::arg("scenario"), py::arg("state"), py::arg("t") = 0.0);
    m.def("ground_probe",
          [](const Scenario& scn, const PyVec& feet, double t) {
              return ground_probe(scn, to_vec(feet), t);
          },
          py::arg("scenario"), py::arg("feet"), py::arg("t") = 0.0);

    m.def("action_from_index", &action_from_index, py::arg("index"));
    m.def("action_index", &action_index, py::arg("forward"), py::arg("turn"), py::arg("strafe"),
          py::arg("jump"));
    m.def("visit_reward", &visit_reward, py::arg("n"), py::arg("r_max") = kRewardMax,
          py::arg("max_counter") = kMaxCounter);
    m.def("epsilon_schedule", &epsilon_schedule, py::arg("steps_done"), py::arg("total_budget"));

    py::class_<Rng>(m, "Rng").def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"),
                                  py::arg("stream") = 0);

    py::class_<VisitBuffer>(m, "VisitBuffer")
        .def(py::init<double, double, int>(), py::arg("tau") = kTau, py::arg("r_max") = kRewardMax,
             py::arg("max_counter") = kMaxCounter)
        .def(
            "observe",
            [](VisitBuffer& b, const PyVec& p, bool grounded) {
                const ObserveResult r = b.observe(to_vec(p), grounded);
                return py::make_tuple(r.index, r.is_new, r.reward);
            },
            py::arg("p"), py::arg("grounded"))
        .def("nearest", [](const VisitBuffer& b, const PyVec& p) { return b.nearest(to_vec(p)); })
        .def(
            "sample_spawn",
            [](const VisitBuffer& b, Rng& rng, const PyVec& fallback) {
                return from_vec(b.sample_spawn(rng.gen, to_vec(fallback)));
            },
            py::arg("rng"), py::arg("fallback"))
        .def("record_termination",
             [](VisitBuffer& b, const PyVec& p) { return b.record_termination(to_vec(p)); })
        .def("coverage", &VisitBuffer::coverage, py::arg("estimated_max"))
        .def("points",
             [](const VisitBuffer& b) {
                 std::vector<PyVec> out;
                 for (const Vec3& p : b.points()) out.push_back(from_vec(p));
                 return out;
             })
        .def("counters", [](const VisitBuffer& b) { return b.counters(); })
        .def("ground_flags",
             [](const VisitBuffer& b) {
                 return std::vector<bool>(b.ground_flags().begin(), b.ground_flags().end());
             })
        .def("termination_counters",
             [](const VisitBuffer& b) { return b.termination_counters(); })
        .def_property_readonly("tau", &VisitBuffer::tau)
        .def_property_readonly("total_observations", &VisitBuffer::total_observations)
        .def("__len__", &VisitBuffer::size);

    py::class_<ConnectivityGraph>(m, "ConnectivityGraph")
        .def(py::init<std::size_t>(), py::arg("node_count") = 0)
        .def("add_traversal", &ConnectivityGraph::add_traversal, py::arg("from_node"),
             py::arg("to_node"), py::arg("count") = 1)
        .def("traversal_count", &ConnectivityGraph::traversal_count)
        .def("edge_list", &ConnectivityGraph::edge_list)
        .def_property_readonly("edge_count", &ConnectivityGraph::edge_count)
        .def_property_readonly("total_traversals", &ConnectivityGraph::total_traversals)
        .def_property_readonly("node_count", &ConnectivityGraph::node_count);

    m.def(
        "build_graph",
        [](const std::vector<std::vector<PyVec>>& trajectories, const VisitBuffer& buffer) {
            std::vector<std::vector<Vec3>> converted;
            for (const auto& t : trajectories) {
                std::vector<Vec3> traj;
                for (const PyVec& p : t) traj.push_back(to_vec(p));
                converted.push_back(std::move(traj));
            }
            GraphBuildStats stats;
            ConnectivityGraph graph = build_graph(converted, buffer, &stats);
            return py::make_tuple(std::move(graph),
                                  py::dict(py::arg("transitions") = stats.transitions,
                                           py::arg("far_samples") = stats.far_samples));
        },
        py::arg("trajectories"), py::arg("buffer"));

    m.def(
        "shortest_path",
        [](const ConnectivityGraph& graph, const VisitBuffer& buffer, const PyVec& start,
           const PyVec& goal) -> py::object {
            const auto path = shortest_path(graph, buffer, to_vec(start), to_vec(goal));
            if (!path) return py::none();
            return py::make_tuple(path->nodes, path->cost);
        },
        py::arg("graph"), py::arg("buffer"), py::arg("start"), py::arg("goal"));

    py::class_<RegionLabeling>(m, "RegionLabeling")
        .def_readonly("labels", &RegionLabeling::labels)
        .def_readonly("cluster_count", &RegionLabeling::cluster_count);

    m.def("cluster", &cluster, py::arg("buffer"), py::arg("linking_radius") = kDefaultLinkingRadius,
          py::arg("min_cluster_size") = kDefaultMinClusterSize);

    m.def(
        "semantic_map",
        [](const ConnectivityGraph& graph, const RegionLabeling& labeling,
           const VisitBuffer& buffer) {
            py::list edges;
            for (const SemanticEdge& e : semantic_map(graph, labeling, buffer).edges)
                edges.append(py::dict(py::arg("from_cluster") = e.from_cluster,
                                      py::arg("to_cluster") = e.to_cluster,
                                      py::arg("direction") = std::string(to_string(e.tag)),
                                      py::arg("traversals") = e.traversals,
                                      py::arg("mean_dheight") = e.mean_dheight));
            return edges;
        },
        py::arg("graph"), py::arg("labeling"), py::arg("buffer"));

    m.def(
        "detect_stuck",
        [](const VisitBuffer& buffer, std::uint64_t episodes) {
            const OutlierReport report = detect_stuck(buffer, episodes);
            py::list flagged;
            for (const OutlierPoint& o : report.flagged)
                flagged.append(py::make_tuple(o.index, o.termination_count, o.score));
            return py::dict(py::arg("flagged") = flagged, py::arg("mean") = report.mean,
                            py::arg("stddev") = report.stddev, py::arg("q1") = report.q1,
                            py::arg("median") = report.median, py::arg("q3") = report.q3,
                            py::arg("threshold") = report.threshold);
        },
        py::arg("buffer"), py::arg("episodes_completed"));

    m.def(
        "run_experiment",
        [](const std::string& scenario_path, const std::string& policy, int workers,
           std::uint64_t steps, std::uint64_t seed, const std::string& out_dir,
           std::uint64_t log_interval, std::uint64_t estimated_max) {
            ExperimentConfig config;
            config.scenario_path = scenario_path;
            config.policy = policy_kind_from_string(policy);
            config.workers = workers;
            config.step_budget = steps;
            config.seed = seed;
            config.out_dir = out_dir;
            config.log_interval = log_interval;
            config.estimated_max = estimated_max;
            ExperimentResult result;
            {
                py::gil_scoped_release release;
                result = run_experiment(config);
            }
            py::dict d = meta_to_dict(result.meta);
            d["recorded_trajectories"] = result.recorded_trajectories.size();
            d["graph_edges"] = result.graph.edge_count();
            return d;
        },
        py::arg("scenario_path"), py::arg("policy") = "curiosity", py::arg("workers") = 1,
        py::arg("steps") = static_cast<std::uint64_t>(kEpisodeSteps), py::arg("seed") = 0,
        py::arg("out_dir") = "", py::arg("log_interval") = 10000, py::arg("estimated_max") = 0);

    m.def("load_buffer", &load_buffer_tsv, py::arg("path"));
    m.def("load_edges", &load_edges_txt, py::arg("path"));
}
