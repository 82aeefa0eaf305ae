#pragma once

#include "playcov/geometry.hpp"
#include "playcov/scenario.hpp"

namespace playcov {

// Fixed-timestep kinematics. 3000 steps of DT cover one minute of play.
inline constexpr double kDt = 0.02;
inline constexpr double kGravity = 9.81;
inline constexpr double kWalkSpeed = 6.0;
inline constexpr double kTurnRate = M_PI;
inline constexpr double kJumpSpeed = 5.0;
inline constexpr double kJumpCooldownMax = 0.5;
inline constexpr double kClimbSpeed = 3.0;
inline constexpr double kCharHalfWidth = 0.2;
inline constexpr double kCharHeight = 1.7;
inline constexpr int kEpisodeSteps = 3000;

/// Kinematic state of one character. Position marks the feet center.
struct CharacterState {
    Vec3 position;
    Vec3 velocity;
    double heading = 0.0;
    bool is_climbing = false;
    bool ground_contact = false;
    double jump_cooldown = 0.0;
    bool frozen = false;
};

struct ActionCommand {
    double forward = 0.0;  // [-1, 1]
    double turn = 0.0;     // [-1, 1]
    double strafe = 0.0;   // [-1, 1]
    bool jump = false;
};

enum class HitClass { None, Solid, Climbable, StuckTrap, ElevatorPlatform };

const char* to_string(HitClass c);

struct RaycastHit {
    double distance = 0.0;
    HitClass hit = HitClass::None;
};

inline Aabb character_box(const Vec3& feet) {
    return {{feet.x - kCharHalfWidth, feet.y, feet.z - kCharHalfWidth},
            {feet.x + kCharHalfWidth, feet.y + kCharHeight, feet.z + kCharHalfWidth}};
}

inline Vec3 heading_forward(double heading) { return {std::cos(heading), 0.0, std::sin(heading)}; }
inline Vec3 heading_strafe(double heading) { return {-std::sin(heading), 0.0, std::cos(heading)}; }

/// Advances one fixed timestep. Deterministic; throws std::invalid_argument on
/// non-finite inputs. Disabled blocks are invisible to collision; stuck traps
/// freeze on contact; elevators carry a standing character.
CharacterState step(const Scenario& scn, const CharacterState& state, const ActionCommand& action,
                    double t);

/// Nearest intersection along a unit-direction ray against enabled geometry
/// (blocks plus elevator platforms at time t). Returns (max_len, None) on miss.
RaycastHit raycast(const Scenario& scn, const Vec3& origin, const Vec3& direction, double max_len,
                   double t = 0.0);

/// True when the character at `feet` is standing on an enabled collider.
bool ground_probe(const Scenario& scn, const Vec3& feet, double t);

}  // namespace playcov
