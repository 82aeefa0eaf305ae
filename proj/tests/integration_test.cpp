#include <doctest.h>

#include "playcov/coordinator.hpp"
#include "playcov/rng.hpp"
#include "support/fixtures.hpp"
#include "support/reachability_oracle.hpp"

using namespace playcov;
using namespace playcov::testsupport;

namespace {

// Small tower world: elevator on the west face, plus a corner surface on the
// east face that is climbable in the "glitch" variant and plain solid once
// fixed. Mirrors the kind of unintended climb route a designer would patch.
Scenario make_tower_world(bool climbable_corner) {
    Scenario scn;
    scn.name = climbable_corner ? "tower-glitch" : "tower-fixed";
    scn.bounds = {{0, -2, 0}, {40, 20, 40}};
    scn.exploration_boundary = {{1, -1, 1}, {39, 18, 39}};
    scn.initial_spawn = {10, 0, 20};
    scn.blocks.push_back({{{0, -2, 0}, {40, 0, 40}}, SurfaceClass::Solid, true});
    scn.blocks.push_back({{{20, 0, 16}, {26, 10, 24}}, SurfaceClass::Solid, true});
    scn.blocks.push_back({{{26, 0, 18}, {27, 10, 22}},
                          climbable_corner ? SurfaceClass::Climbable : SurfaceClass::Solid, true});
    Elevator e;
    e.platform = {{17, -0.4, 18.5}, {20, 0, 21.5}};
    e.waypoints = {{18.5, -0.2, 20}, {18.5, 9.8, 20}};
    e.speed = 2.0;
    e.phase = 10.0;  // starts at the top, reaches the ground at t = 5 s
    scn.elevators.push_back(e);
    return scn;
}

std::vector<int> elevator_ride_script() {
    std::vector<int> script;
    for (int i = 0; i < 65; ++i) script.push_back(action_index(1, 0, 0, 0));   // into the shaft
    for (int i = 0; i < 433; ++i) script.push_back(action_index(0, 0, 0, 0));  // scooped, ride up
    script.push_back(action_index(1, 0, 0, 1));                                // hop off at the top
    for (int i = 0; i < 45; ++i) script.push_back(action_index(1, 0, 0, 0));   // onto the tower
    script.push_back(action_index(0, 0, 0, 0));
    return script;
}

std::vector<int> corner_climb_script() {
    std::vector<int> script;
    for (int i = 0; i < 58; ++i) script.push_back(action_index(0, 0, -1, 0));  // south around
    for (int i = 0; i < 154; ++i) script.push_back(action_index(1, 0, 0, 0));  // east past tower
    for (int i = 0; i < 58; ++i) script.push_back(action_index(0, 0, 1, 0));   // line up east face
    for (int i = 0; i < 205; ++i) script.push_back(action_index(-1, 0, 0, 0));  // press and climb
    script.push_back(action_index(0, 0, 0, 0));
    return script;
}

struct TowerRun {
    VisitBuffer buffer;
    ConnectivityGraph graph;
    Vec3 final_climb_position;
};

TowerRun run_tower_scripts(const Scenario& scn) {
    TowerRun run;
    DirectVisitAccess access(run.buffer);
    EpisodeOptions opts;
    opts.initial_heading = 0.0;
    opts.initial_position = scn.initial_spawn;

    std::vector<std::vector<Vec3>> trajectories;
    {
        ScriptedPolicy ride(elevator_ride_script());
        std::mt19937_64 rng = make_stream_rng(77, 0);
        const EpisodeResult r = run_episode(scn, ride, access, rng, opts, 0);
        trajectories.push_back(r.stride_trajectory);
    }
    {
        ScriptedPolicy climb(corner_climb_script());
        std::mt19937_64 rng = make_stream_rng(77, 1);
        const EpisodeResult r = run_episode(scn, climb, access, rng, opts, 1);
        trajectories.push_back(r.stride_trajectory);
        run.final_climb_position = r.final_position;
    }
    run.graph = build_graph(trajectories, run.buffer);
    return run;
}

bool path_uses_elevator_column(const PathResult& path, const VisitBuffer& buffer) {
    for (int node : path.nodes) {
        const Vec3& p = buffer.points()[node];
        if (std::hypot(p.x - 18.5, p.z - 20.0) <= 3.5 && p.y > 2.0 && p.y < 9.0) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("fixing the climbable corner forces paths through the elevator") {
    const Vec3 ground_start{10, 0, 20};
    const Vec3 tower_goal{23, 10, 20};

    // glitch variant: the corner climb reaches the top
    const Scenario glitch = make_tower_world(true);
    TowerRun before = run_tower_scripts(glitch);
    CHECK(before.final_climb_position.y == doctest::Approx(10.0).epsilon(0.01));
    const auto path_before = shortest_path(before.graph, before.buffer, ground_start, tower_goal);
    REQUIRE(path_before.has_value());

    // fixed variant: the same climb script stays on the ground
    const Scenario fixed = make_tower_world(false);
    TowerRun after = run_tower_scripts(fixed);
    CHECK(after.final_climb_position.y < 1.0);
    const auto path_after = shortest_path(after.graph, after.buffer, ground_start, tower_goal);
    REQUIRE(path_after.has_value());
    CHECK(path_uses_elevator_column(*path_after, after.buffer));
}

TEST_CASE("cluster count on a mesa run matches the oracle region count within one") {
    const Scenario scn = load_fixture("mesa.scn");
    const ReachabilityOracle oracle = compute_reachable_cells(scn);

    ExperimentConfig config;
    config.scenario_path = scenario_path("mesa.scn");
    config.policy = PolicyKind::Curiosity;
    config.workers = 1;
    config.step_budget = 300000;
    config.seed = 11;
    config.log_interval = 0;
    const ExperimentResult result = run_experiment(config);

    const RegionLabeling labeling = cluster(result.buffer, 2.0 * kTau, 5);
    const int oracle_regions = oracle.region_count(2.0 * kTau);
    CHECK(std::abs(labeling.cluster_count - oracle_regions) <= 1);

    SUBCASE("buffer coverage against the oracle estimate stays a fraction") {
        const double f = result.buffer.coverage(oracle.cell_count());
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
        // the bundled estimate is the oracle count
        REQUIRE(scn.estimated_max_points.has_value());
        CHECK(*scn.estimated_max_points == oracle.cell_count());
    }
}

TEST_CASE("eb exits and episode terminations stay consistent on full runs") {
    const Scenario scn = load_fixture("mesa.scn");
    VisitBuffer buffer;
    DirectVisitAccess access(buffer);
    RandomPolicy random;

    std::uint64_t eb_exit_episodes = 0, left_eb_causes = 0;
    for (int e = 0; e < 40; ++e) {
        std::mt19937_64 rng = make_stream_rng(404, e);
        const EpisodeResult r = run_episode(scn, random, access, rng, EpisodeOptions{}, e);
        bool exited = false;
        for (const CrossingCandidate& c : r.crossing_candidates)
            if (c.event.boundary_id == "EB" && c.event.direction == CrossDirection::Exit)
                exited = true;
        if (exited) ++eb_exit_episodes;
        if (r.cause == TerminationCause::LeftEb) ++left_eb_causes;
        if (exited) CHECK(r.cause == TerminationCause::LeftEb);
    }
    CHECK(eb_exit_episodes == left_eb_causes);
}

TEST_CASE("final coverage row equals the buffer fraction of the estimate") {
    ExperimentConfig config;
    config.scenario_path = scenario_path("mesa.scn");
    config.policy = PolicyKind::Random;
    config.workers = 1;
    config.step_budget = 30000;
    config.seed = 21;
    config.log_interval = 10000;
    const ExperimentResult result = run_experiment(config);

    REQUIRE(!result.coverage_log.empty());
    const CoverageRow& last = result.coverage_log.back();
    CHECK(last.points == result.buffer.size());
    CHECK(last.coverage ==
          doctest::Approx(result.buffer.coverage(result.meta.estimated_max)).epsilon(1e-12));
    CHECK(last.steps == result.meta.steps_done);
}

TEST_CASE("ledge drops produce one-way downward edges") {
    // Climbable wall up one side of a slab, open drop on the other: the climb
    // column carries the up-traversals, the drop edge exists downward only.
    Scenario scn = testsupport::make_flat_world();
    scn.blocks.push_back({{{22, 0, 14}, {30, 8, 26}}, SurfaceClass::Solid, true});
    scn.blocks.push_back({{{21, 0, 16}, {22, 8, 24}}, SurfaceClass::Climbable, true});

    VisitBuffer buffer;
    DirectVisitAccess access(buffer);
    EpisodeOptions opts;
    opts.initial_heading = 0.0;
    opts.initial_position = scn.initial_spawn;  // (20, 0, 20)

    // press east into the climbable face, climb, cross the slab, walk off the
    // east edge and keep going a few meters on the ground
    std::vector<int> script;
    for (int i = 0; i < 260; ++i) script.push_back(action_index(1, 0, 0, 0));
    script.push_back(action_index(0, 0, 0, 0));
    ScriptedPolicy policy(script);
    std::mt19937_64 rng = make_stream_rng(9, 0);
    const EpisodeResult r = run_episode(scn, policy, access, rng, opts, 0);
    CHECK(r.final_position.x > 30.5);
    CHECK(r.final_position.y == doctest::Approx(0.0).epsilon(0.01));

    const ConnectivityGraph graph = build_graph({r.stride_trajectory}, buffer);
    bool drop_edge = false;
    for (const auto& [from, to, count] : graph.edge_list()) {
        const double dh = buffer.points()[to].y - buffer.points()[from].y;
        if (dh < -4.0) {
            drop_edge = true;
            CHECK(graph.traversal_count(to, from) == 0);  // no way back up the drop
        }
    }
    CHECK(drop_edge);
}
