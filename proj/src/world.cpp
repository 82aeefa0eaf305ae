#include "playcov/world.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

namespace playcov {

namespace {

constexpr double kContactTol = 1e-6;    // resting-contact detection
constexpr double kClimbReach = 0.1;     // horizontal reach to grab a climbable face
constexpr double kTrapTouch = 0.01;     // contact margin for stuck traps
constexpr double kCarryTol = 1e-3;      // feet-to-platform tolerance for carrying
constexpr double kMaxAxisMove = 0.15;   // substep length; below thinnest geometry

struct Collider {
    Aabb box;
    HitClass cls;
};

void gather_colliders(const Scenario& scn, double t, std::vector<Collider>& out) {
    out.clear();
    for (const Block& b : scn.blocks) {
        if (!b.collision_enabled) continue;
        HitClass c = b.surface_class == SurfaceClass::Climbable ? HitClass::Climbable
                   : b.surface_class == SurfaceClass::StuckTrap ? HitClass::StuckTrap
                                                                : HitClass::Solid;
        out.push_back({b.box, c});
    }
    for (const Elevator& e : scn.elevators) out.push_back({e.box_at(t), HitClass::ElevatorPlatform});
}

// Moves the character along one axis with substepping, resolving each collider
// overlap by minimal translation along that axis.
void move_axis(Vec3& pos, int axis, double delta, const std::vector<Collider>& colliders,
               bool& pushed_up, bool& pushed_down) {
    double remaining = delta;
    while (remaining != 0.0) {
        const double d = std::clamp(remaining, -kMaxAxisMove, kMaxAxisMove);
        pos[axis] += d;
        remaining -= d;
        bool blocked = false;
        for (int pass = 0; pass < 4; ++pass) {
            bool any = false;
            for (const Collider& c : colliders) {
                const Aabb now = character_box(pos);
                if (!now.overlaps(c.box)) continue;
                const double pen_neg = now.max[axis] - c.box.min[axis];  // push toward -axis
                const double pen_pos = c.box.max[axis] - now.min[axis];  // push toward +axis
                if (pen_neg <= pen_pos) {
                    pos[axis] -= pen_neg;
                    if (axis == 1) pushed_down = true;
                } else {
                    pos[axis] += pen_pos;
                    if (axis == 1) pushed_up = true;
                }
                any = true;
                blocked = true;
            }
            if (!any) break;
        }
        if (blocked) break;
    }
}

bool standing_on_box(const Vec3& feet, const Aabb& box, double tol) {
    const Aabb cb = character_box(feet);
    const bool horizontal = cb.min.x < box.max.x && cb.max.x > box.min.x &&
                            cb.min.z < box.max.z && cb.max.z > box.min.z;
    return horizontal && std::abs(feet.y - box.max.y) <= tol && feet.y >= box.max.y - tol;
}

// Climbable-face grab: character box within reach of a climbable block side
// while the desired horizontal velocity pushes into that face.
bool climb_contact(const Scenario& scn, const Vec3& feet, const Vec3& horizontal_vel) {
    if (horizontal_vel.x == 0.0 && horizontal_vel.z == 0.0) return false;
    const Aabb cb = character_box(feet);
    for (const Block& b : scn.blocks) {
        if (!b.collision_enabled || b.surface_class != SurfaceClass::Climbable) continue;
        const Aabb& box = b.box;
        if (cb.min.y >= box.max.y || cb.max.y <= box.min.y) continue;  // no vertical overlap
        const bool x_span = cb.min.x < box.max.x && cb.max.x > box.min.x;
        const bool z_span = cb.min.z < box.max.z && cb.max.z > box.min.z;
        // West face (character on -x side, pushing +x), and the three analogues.
        if (z_span && cb.max.x <= box.min.x + kContactTol && box.min.x - cb.max.x <= kClimbReach &&
            horizontal_vel.x > 0.0)
            return true;
        if (z_span && cb.min.x >= box.max.x - kContactTol && cb.min.x - box.max.x <= kClimbReach &&
            horizontal_vel.x < 0.0)
            return true;
        if (x_span && cb.max.z <= box.min.z + kContactTol && box.min.z - cb.max.z <= kClimbReach &&
            horizontal_vel.z > 0.0)
            return true;
        if (x_span && cb.min.z >= box.max.z - kContactTol && cb.min.z - box.max.z <= kClimbReach &&
            horizontal_vel.z < 0.0)
            return true;
    }
    return false;
}

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

const char* to_string(HitClass c) {
    switch (c) {
        case HitClass::None: return "none";
        case HitClass::Solid: return "solid";
        case HitClass::Climbable: return "climbable";
        case HitClass::StuckTrap: return "stuck_trap";
        case HitClass::ElevatorPlatform: return "elevator_platform";
    }
    return "none";
}

CharacterState step(const Scenario& scn, const CharacterState& state, const ActionCommand& action,
                    double t) {
    if (!is_finite(state.position) || !is_finite(state.velocity) || !std::isfinite(state.heading) ||
        !std::isfinite(state.jump_cooldown))
        throw std::invalid_argument("step: non-finite character state");
    if (!std::isfinite(action.forward) || !std::isfinite(action.turn) || !std::isfinite(action.strafe))
        throw std::invalid_argument("step: non-finite action");
    if (!std::isfinite(t)) throw std::invalid_argument("step: non-finite time");

    CharacterState out = state;
    if (state.frozen) {
        out.velocity = {0.0, 0.0, 0.0};
        return out;
    }

    const double fwd = clamp_unit(action.forward);
    const double trn = clamp_unit(action.turn);
    const double str = clamp_unit(action.strafe);

    out.heading = wrap_angle(state.heading + trn * kTurnRate * kDt);
    out.jump_cooldown = std::max(0.0, state.jump_cooldown - kDt);

    Vec3 desired = heading_forward(out.heading) * fwd + heading_strafe(out.heading) * str;
    const double mag = norm(desired);
    if (mag > 1.0) desired = desired * (1.0 / mag);
    const Vec3 horizontal_vel = desired * kWalkSpeed;

    double vy;
    if (climb_contact(scn, state.position, horizontal_vel)) {
        out.is_climbing = true;
        vy = kClimbSpeed;
    } else {
        out.is_climbing = false;
        if (action.jump && state.ground_contact && state.jump_cooldown <= 0.0) {
            vy = kJumpSpeed;
            out.jump_cooldown = kJumpCooldownMax;
        } else {
            vy = state.velocity.y - kGravity * kDt;
        }
    }

    static thread_local std::vector<Collider> colliders;
    gather_colliders(scn, t + kDt, colliders);

    Vec3 pos = state.position;

    // A standing character is carried by its platform.
    for (const Elevator& e : scn.elevators) {
        if (standing_on_box(state.position, e.box_at(t), kCarryTol)) {
            pos += e.center_at(t + kDt) - e.center_at(t);
            break;
        }
    }

    bool pushed_up = false, pushed_down = false;

    // Platforms move on their own and can intersect the character between
    // frames. Settle any such overlap by lifting the character onto the
    // collider top before integrating: resolving sideways or downward would
    // fling it through walls or squeeze it into the floor.
    for (int pass = 0; pass < 4; ++pass) {
        bool any = false;
        for (const Collider& c : colliders) {
            const Aabb now = character_box(pos);
            if (!now.overlaps(c.box)) continue;
            pos.y = c.box.max.y;
            pushed_up = true;
            any = true;
        }
        if (!any) break;
    }

    move_axis(pos, 0, horizontal_vel.x * kDt, colliders, pushed_up, pushed_down);
    move_axis(pos, 2, horizontal_vel.z * kDt, colliders, pushed_up, pushed_down);
    move_axis(pos, 1, vy * kDt, colliders, pushed_up, pushed_down);

    if (pushed_up) vy = 0.0;          // landed
    if (pushed_down && vy > 0.0) vy = 0.0;  // head bump

    bool grounded = pushed_up;
    if (!grounded) {
        for (const Collider& c : colliders) {
            if (standing_on_box(pos, c.box, kContactTol)) {
                grounded = true;
                break;
            }
        }
    }
    if (grounded && vy < 0.0) vy = 0.0;

    out.position = pos;
    out.velocity = {horizontal_vel.x, vy, horizontal_vel.z};
    out.ground_contact = grounded;

    const Aabb touch = character_box(pos).expanded(kTrapTouch);
    for (const Block& b : scn.blocks) {
        if (b.collision_enabled && b.surface_class == SurfaceClass::StuckTrap &&
            touch.overlaps(b.box)) {
            out.frozen = true;
            out.velocity = {0.0, 0.0, 0.0};
            out.is_climbing = false;
            break;
        }
    }
    return out;
}

namespace {

// Slab intersection; returns entry distance (0 when origin is inside), or a
// negative value on miss.
double ray_box(const Vec3& origin, const Vec3& dir, const Aabb& box, double max_len) {
    double tmin = 0.0, tmax = max_len;
    for (int a = 0; a < 3; ++a) {
        if (dir[a] == 0.0) {
            if (origin[a] < box.min[a] || origin[a] > box.max[a]) return -1.0;
        } else {
            const double inv = 1.0 / dir[a];
            double t0 = (box.min[a] - origin[a]) * inv;
            double t1 = (box.max[a] - origin[a]) * inv;
            if (t0 > t1) std::swap(t0, t1);
            tmin = std::max(tmin, t0);
            tmax = std::min(tmax, t1);
            if (tmin > tmax) return -1.0;
        }
    }
    return tmin;
}

}  // namespace

RaycastHit raycast(const Scenario& scn, const Vec3& origin, const Vec3& direction, double max_len,
                   double t) {
    if (!is_finite(origin) || !is_finite(direction) || !std::isfinite(max_len))
        throw std::invalid_argument("raycast: non-finite input");
    if (std::abs(norm(direction) - 1.0) > 1e-9)
        throw std::invalid_argument("raycast: direction must be unit-norm");
    if (!(max_len > 0.0)) throw std::invalid_argument("raycast: max_len must be positive");

    RaycastHit best{max_len, HitClass::None};
    auto consider = [&](const Aabb& box, HitClass cls) {
        const double d = ray_box(origin, direction, box, max_len);
        if (d >= 0.0 && d < best.distance) best = {d, cls};
    };
    for (const Block& b : scn.blocks) {
        if (!b.collision_enabled) continue;
        HitClass c = b.surface_class == SurfaceClass::Climbable ? HitClass::Climbable
                   : b.surface_class == SurfaceClass::StuckTrap ? HitClass::StuckTrap
                                                                : HitClass::Solid;
        consider(b.box, c);
    }
    for (const Elevator& e : scn.elevators) consider(e.box_at(t), HitClass::ElevatorPlatform);
    return best;
}

bool ground_probe(const Scenario& scn, const Vec3& feet, double t) {
    for (const Block& b : scn.blocks)
        if (b.collision_enabled && standing_on_box(feet, b.box, kContactTol)) return true;
    for (const Elevator& e : scn.elevators)
        if (standing_on_box(feet, e.box_at(t), kCarryTol)) return true;
    return false;
}

}  // namespace playcov
