#pragma once

#include <string>

#include "playcov/scenario.hpp"

#ifndef PLAYCOV_SCENARIO_DIR
#define PLAYCOV_SCENARIO_DIR "scenarios"
#endif

namespace playcov::testsupport {

inline std::string scenario_path(const std::string& name) {
    return std::string(PLAYCOV_SCENARIO_DIR) + "/" + name;
}

inline Scenario load_fixture(const std::string& name) {
    return load_scenario(scenario_path(name));
}

/// Single ground slab with perimeter walls, spawn in the middle.
inline Scenario make_flat_world(double side = 40.0, double wall_height = 2.0) {
    Scenario scn;
    scn.name = "test-flat";
    scn.bounds = {{0, -2, 0}, {side, 20, side}};
    scn.exploration_boundary = {{1, -1, 1}, {side - 1, 18, side - 1}};
    scn.initial_spawn = {side / 2, 0, side / 2};
    scn.blocks.push_back({{{0, -2, 0}, {side, 0, side}}, SurfaceClass::Solid, true});
    scn.blocks.push_back({{{0, 0, 0}, {1, wall_height, side}}, SurfaceClass::Solid, true});
    scn.blocks.push_back({{{side - 1, 0, 0}, {side, wall_height, side}}, SurfaceClass::Solid, true});
    scn.blocks.push_back({{{1, 0, 0}, {side - 1, wall_height, 1}}, SurfaceClass::Solid, true});
    scn.blocks.push_back({{{1, 0, side - 1}, {side - 1, wall_height, side}}, SurfaceClass::Solid, true});
    return scn;
}

}  // namespace playcov::testsupport
