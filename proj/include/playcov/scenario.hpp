#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "playcov/geometry.hpp"

namespace playcov {

enum class SurfaceClass { Solid, Climbable, StuckTrap };

const char* to_string(SurfaceClass c);
SurfaceClass surface_class_from_string(const std::string& s);

struct Block {
    Aabb box;
    SurfaceClass surface_class = SurfaceClass::Solid;
    bool collision_enabled = true;
};

/// Platform cycling through its waypoints at constant speed. The platform box
/// describes the pose with the box reference (its center) at waypoints[0];
/// phase is the initial arc-length offset along the loop, in meters.
struct Elevator {
    Aabb platform;
    std::vector<Vec3> waypoints;
    double speed = 1.0;
    double phase = 0.0;

    double loop_length() const;
    Vec3 center_at(double t) const;
    Aabb box_at(double t) const;
};

struct Roi {
    std::string name;
    Aabb box;
};

struct Scenario {
    std::string name;
    Aabb bounds;
    std::vector<Block> blocks;
    std::vector<Elevator> elevators;
    Vec3 initial_spawn;
    Aabb exploration_boundary;
    std::vector<Roi> rois;
    std::optional<std::uint64_t> estimated_max_points;
};

/// Raised on schema or invariant violations; the message names the offending field.
class ScenarioError : public std::runtime_error {
public:
    explicit ScenarioError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Parses and validates a scenario from its JSON document text.
Scenario parse_scenario(const std::string& document);

/// Loads a scenario file from disk.
Scenario load_scenario(const std::string& path);

/// Serializes a scenario back to its document form.
std::string scenario_to_document(const Scenario& scn);

}  // namespace playcov
