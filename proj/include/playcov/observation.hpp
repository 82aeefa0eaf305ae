#pragma once

#include <array>

#include "playcov/world.hpp"

namespace playcov {

inline constexpr int kObservationSize = 37;
inline constexpr int kRayCount = 12;
inline constexpr double kRayMax = 20.0;

using Observation = std::array<double, kObservationSize>;

/// Fixed class encoding for the semantic half of each vision pair.
double encode_class(HitClass c);

/// Ray directions in the character frame, rotated by heading at build time:
/// 8 horizontal spokes at 45 degree increments, forward pitched -30 and -60,
/// straight down, and forward-up +30. Cast from 1 m above the feet.
std::array<Vec3, kRayCount> ray_directions(double heading);

/// Layout: position(3), velocity(3), rotation quaternion xyzw(4), is_climbing,
/// ground_contact, jump_cooldown, then 12 x (distance, class). All values
/// normalized into [-1, 1].
Observation build_observation(const Scenario& scn, const CharacterState& state, double t);

}  // namespace playcov
