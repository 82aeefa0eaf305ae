#include "playcov/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace playcov {

using nlohmann::json;

const char* to_string(SurfaceClass c) {
    switch (c) {
        case SurfaceClass::Solid: return "solid";
        case SurfaceClass::Climbable: return "climbable";
        case SurfaceClass::StuckTrap: return "stuck_trap";
    }
    return "solid";
}

SurfaceClass surface_class_from_string(const std::string& s) {
    if (s == "solid") return SurfaceClass::Solid;
    if (s == "climbable") return SurfaceClass::Climbable;
    if (s == "stuck_trap") return SurfaceClass::StuckTrap;
    throw ScenarioError("unknown surface_class \"" + s + "\"");
}

double Elevator::loop_length() const {
    double total = 0.0;
    for (std::size_t i = 0; i < waypoints.size(); ++i)
        total += distance(waypoints[i], waypoints[(i + 1) % waypoints.size()]);
    return total;
}

Vec3 Elevator::center_at(double t) const {
    const double total = loop_length();
    if (total <= 0.0) return waypoints.front();
    double d = std::fmod(phase + speed * t, total);
    if (d < 0.0) d += total;
    for (std::size_t i = 0; i < waypoints.size(); ++i) {
        const Vec3& a = waypoints[i];
        const Vec3& b = waypoints[(i + 1) % waypoints.size()];
        const double seg = distance(a, b);
        if (d <= seg || i + 1 == waypoints.size())
            return seg > 0.0 ? lerp(a, b, d / seg) : a;
        d -= seg;
    }
    return waypoints.front();
}

Aabb Elevator::box_at(double t) const {
    return platform.translated(center_at(t) - waypoints.front());
}

namespace {

Vec3 parse_vec3(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() || !j[2].is_number())
        throw ScenarioError(field + " must be an array of 3 numbers");
    Vec3 v{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
    if (!is_finite(v)) throw ScenarioError(field + " must be finite");
    return v;
}

Aabb parse_box(const json& j, const std::string& field) {
    if (!j.is_object() || !j.contains("min") || !j.contains("max"))
        throw ScenarioError(field + " must be an object with min and max corners");
    Aabb box{parse_vec3(j.at("min"), field + ".min"), parse_vec3(j.at("max"), field + ".max")};
    return box;
}

json vec3_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
json box_to_json(const Aabb& b) { return json{{"min", vec3_to_json(b.min)}, {"max", vec3_to_json(b.max)}}; }

void validate(const Scenario& scn) {
    if (!scn.bounds.valid()) throw ScenarioError("bounds extents must be positive");
    if (!scn.exploration_boundary.valid())
        throw ScenarioError("exploration_boundary extents must be positive");
    if (!scn.bounds.contains_box(scn.exploration_boundary))
        throw ScenarioError("exploration_boundary outside bounds");
    if (!scn.exploration_boundary.contains(scn.initial_spawn))
        throw ScenarioError("initial_spawn outside exploration_boundary");
    for (std::size_t i = 0; i < scn.blocks.size(); ++i) {
        const Block& b = scn.blocks[i];
        if (!b.box.valid())
            throw ScenarioError("blocks[" + std::to_string(i) + "].box extents must be positive");
        if (b.surface_class == SurfaceClass::StuckTrap && !b.collision_enabled)
            throw ScenarioError("blocks[" + std::to_string(i) +
                                "]: stuck_trap blocks must have collision_enabled = true");
    }
    for (std::size_t i = 0; i < scn.elevators.size(); ++i) {
        const Elevator& e = scn.elevators[i];
        const std::string field = "elevators[" + std::to_string(i) + "]";
        if (!e.platform.valid()) throw ScenarioError(field + ".platform extents must be positive");
        if (e.waypoints.size() < 2) throw ScenarioError(field + ".waypoints needs at least 2 points");
        if (!(e.speed > 0.0)) throw ScenarioError(field + ".speed must be positive");
        if (e.loop_length() <= 0.0) throw ScenarioError(field + ".waypoints form a zero-length loop");
    }
    for (const Roi& r : scn.rois) {
        if (!r.box.valid()) throw ScenarioError("rois[" + r.name + "].box extents must be positive");
        if (!scn.exploration_boundary.contains_box(r.box))
            throw ScenarioError("rois[" + r.name + "] outside exploration_boundary");
        if (r.name.empty()) throw ScenarioError("rois: every ROI needs a name");
    }
    if (scn.estimated_max_points && *scn.estimated_max_points == 0)
        throw ScenarioError("estimated_max_points must be positive when present");
}

}  // namespace

Scenario parse_scenario(const std::string& document) {
    json j;
    try {
        j = json::parse(document);
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("invalid scenario document: ") + e.what());
    }
    if (!j.is_object()) throw ScenarioError("scenario document must be a JSON object");

    for (const char* field : {"name", "bounds", "blocks", "initial_spawn", "exploration_boundary"})
        if (!j.contains(field)) throw ScenarioError(std::string("missing field \"") + field + "\"");

    Scenario scn;
    scn.name = j.at("name").get<std::string>();
    scn.bounds = parse_box(j.at("bounds"), "bounds");
    scn.initial_spawn = parse_vec3(j.at("initial_spawn"), "initial_spawn");
    scn.exploration_boundary = parse_box(j.at("exploration_boundary"), "exploration_boundary");

    for (std::size_t i = 0; i < j.at("blocks").size(); ++i) {
        const json& jb = j.at("blocks")[i];
        const std::string field = "blocks[" + std::to_string(i) + "]";
        Block b;
        b.box = parse_box(jb.at("box"), field + ".box");
        b.surface_class = surface_class_from_string(jb.value("surface_class", "solid"));
        b.collision_enabled = jb.value("collision_enabled", true);
        scn.blocks.push_back(b);
    }
    if (j.contains("elevators")) {
        for (std::size_t i = 0; i < j.at("elevators").size(); ++i) {
            const json& je = j.at("elevators")[i];
            const std::string field = "elevators[" + std::to_string(i) + "]";
            Elevator e;
            e.platform = parse_box(je.at("platform"), field + ".platform");
            for (std::size_t k = 0; k < je.at("waypoints").size(); ++k)
                e.waypoints.push_back(parse_vec3(je.at("waypoints")[k],
                                                 field + ".waypoints[" + std::to_string(k) + "]"));
            e.speed = je.at("speed").get<double>();
            e.phase = je.value("phase", 0.0);
            scn.elevators.push_back(e);
        }
    }
    if (j.contains("rois")) {
        for (const json& jr : j.at("rois")) {
            Roi r;
            r.name = jr.at("name").get<std::string>();
            r.box = parse_box(jr.at("box"), "rois[" + r.name + "].box");
            scn.rois.push_back(r);
        }
    }
    if (j.contains("estimated_max_points") && !j.at("estimated_max_points").is_null())
        scn.estimated_max_points = j.at("estimated_max_points").get<std::uint64_t>();

    validate(scn);
    return scn;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string scenario_to_document(const Scenario& scn) {
    json j;
    j["name"] = scn.name;
    j["bounds"] = box_to_json(scn.bounds);
    j["initial_spawn"] = vec3_to_json(scn.initial_spawn);
    j["exploration_boundary"] = box_to_json(scn.exploration_boundary);
    j["blocks"] = json::array();
    for (const Block& b : scn.blocks)
        j["blocks"].push_back(json{{"box", box_to_json(b.box)},
                                   {"surface_class", to_string(b.surface_class)},
                                   {"collision_enabled", b.collision_enabled}});
    j["elevators"] = json::array();
    for (const Elevator& e : scn.elevators) {
        json we = json::array();
        for (const Vec3& w : e.waypoints) we.push_back(vec3_to_json(w));
        j["elevators"].push_back(json{{"platform", box_to_json(e.platform)},
                                      {"waypoints", we},
                                      {"speed", e.speed},
                                      {"phase", e.phase}});
    }
    j["rois"] = json::array();
    for (const Roi& r : scn.rois)
        j["rois"].push_back(json{{"name", r.name}, {"box", box_to_json(r.box)}});
    if (scn.estimated_max_points) j["estimated_max_points"] = *scn.estimated_max_points;
    return j.dump(2) + "\n";
}

}  // namespace playcov
