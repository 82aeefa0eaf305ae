#include "playcov/observation.hpp"

namespace playcov {

double encode_class(HitClass c) {
    switch (c) {
        case HitClass::None: return 0.0;
        case HitClass::Solid: return 0.25;
        case HitClass::Climbable: return 0.5;
        case HitClass::StuckTrap: return 0.75;
        case HitClass::ElevatorPlatform: return 1.0;
    }
    return 0.0;
}

std::array<Vec3, kRayCount> ray_directions(double heading) {
    std::array<Vec3, kRayCount> dirs;
    int n = 0;
    for (int k = 0; k < 8; ++k) {
        const double a = heading + k * (M_PI / 4.0);
        dirs[n++] = {std::cos(a), 0.0, std::sin(a)};
    }
    const Vec3 fwd = heading_forward(heading);
    for (double pitch : {-M_PI / 6.0, -M_PI / 3.0}) {
        const double c = std::cos(pitch), s = std::sin(pitch);
        dirs[n++] = {fwd.x * c, s, fwd.z * c};
    }
    dirs[n++] = {0.0, -1.0, 0.0};
    {
        const double c = std::cos(M_PI / 6.0), s = std::sin(M_PI / 6.0);
        dirs[n++] = {fwd.x * c, s, fwd.z * c};
    }
    return dirs;
}

Observation build_observation(const Scenario& scn, const CharacterState& state, double t) {
    Observation obs{};
    int n = 0;

    const Vec3 center = scn.bounds.center();
    const Vec3 half = scn.bounds.extent() * 0.5;
    for (int a = 0; a < 3; ++a) {
        const double h = half[a] > 0.0 ? half[a] : 1.0;
        obs[n++] = std::clamp((state.position[a] - center[a]) / h, -1.0, 1.0);
    }
    for (int a = 0; a < 3; ++a)
        obs[n++] = std::clamp(state.velocity[a] / kWalkSpeed, -1.0, 1.0);

    // Yaw-only rotation exposed as a unit quaternion (x, y, z, w) about +Y.
    obs[n++] = 0.0;
    obs[n++] = std::sin(state.heading * 0.5);
    obs[n++] = 0.0;
    obs[n++] = std::cos(state.heading * 0.5);

    obs[n++] = state.is_climbing ? 1.0 : 0.0;
    obs[n++] = state.ground_contact ? 1.0 : 0.0;
    obs[n++] = std::clamp(state.jump_cooldown / kJumpCooldownMax, 0.0, 1.0);

    const Vec3 eye = state.position + Vec3{0.0, 1.0, 0.0};
    for (const Vec3& d : ray_directions(state.heading)) {
        const RaycastHit hit = raycast(scn, eye, d, kRayMax, t);
        obs[n++] = hit.distance / kRayMax;
        obs[n++] = encode_class(hit.hit);
    }
    return obs;
}

}  // namespace playcov
