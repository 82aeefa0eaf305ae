#include <doctest.h>

#include <random>

#include "playcov/observation.hpp"
#include "playcov/world.hpp"
#include "support/fixtures.hpp"

using namespace playcov;
using testsupport::make_flat_world;

namespace {

// Face-by-face ray-box oracle, independent of the slab routine under test:
// intersect the ray with each of the six face planes and keep hits whose
// point lies on the face rectangle.
double oracle_ray_box(const Vec3& o, const Vec3& d, const Aabb& box, double max_len) {
    if (box.contains(o)) return 0.0;
    double best = max_len + 1.0;
    for (int axis = 0; axis < 3; ++axis) {
        for (double plane : {box.min[axis], box.max[axis]}) {
            if (d[axis] == 0.0) continue;
            const double t = (plane - o[axis]) / d[axis];
            if (t < 0.0 || t > max_len) continue;
            const int u = (axis + 1) % 3, v = (axis + 2) % 3;
            const double pu = o[u] + t * d[u];
            const double pv = o[v] + t * d[v];
            if (pu >= box.min[u] && pu <= box.max[u] && pv >= box.min[v] && pv <= box.max[v])
                best = std::min(best, t);
        }
    }
    return best;
}

CharacterState rest_state(const Vec3& pos) {
    CharacterState s;
    s.position = pos;
    s.ground_contact = true;
    return s;
}

}  // namespace

TEST_CASE("zero action on flat ground is a fixed point") {
    const Scenario scn = make_flat_world();
    CharacterState s = rest_state({20, 0, 20});
    for (int k = 0; k < 50; ++k) {
        const CharacterState next = step(scn, s, ActionCommand{}, k * kDt);
        CHECK(next.position == s.position);
        CHECK(next.ground_contact);
        s = next;
    }
}

TEST_CASE("step is deterministic") {
    const Scenario scn = make_flat_world();
    CharacterState s = rest_state({20, 0, 20});
    ActionCommand a;
    a.forward = 0.63;
    a.turn = -0.4;
    a.jump = true;
    const CharacterState n1 = step(scn, s, a, 0.42);
    const CharacterState n2 = step(scn, s, a, 0.42);
    CHECK(n1.position == n2.position);
    CHECK(n1.velocity == n2.velocity);
    CHECK(n1.heading == n2.heading);
}

TEST_CASE("jump apex matches the ballistic closed form") {
    const Scenario scn = make_flat_world();
    CharacterState s = rest_state({20, 0, 20});
    ActionCommand jump;
    jump.jump = true;
    s = step(scn, s, jump, 0.0);
    CHECK(s.velocity.y == kJumpSpeed);
    CHECK(s.jump_cooldown == kJumpCooldownMax);

    double apex = s.position.y;
    for (int k = 1; k < 200; ++k) {
        s = step(scn, s, ActionCommand{}, k * kDt);
        apex = std::max(apex, s.position.y);
    }
    const double closed_form = kJumpSpeed * kJumpSpeed / (2.0 * kGravity);
    CHECK(closed_form == doctest::Approx(1.27).epsilon(0.01));
    CHECK(std::abs(apex - closed_form) <= 2.0 * kDt * kJumpSpeed);
    CHECK(s.ground_contact);  // back on the ground afterwards
}

TEST_CASE("jump requires ground contact and an expired cooldown") {
    const Scenario scn = make_flat_world();
    CharacterState airborne = rest_state({20, 5, 20});
    airborne.ground_contact = false;
    ActionCommand jump;
    jump.jump = true;
    CHECK(step(scn, airborne, jump, 0.0).velocity.y < 0.0);

    CharacterState cooling = rest_state({20, 0, 20});
    cooling.jump_cooldown = 0.3;
    const CharacterState next = step(scn, cooling, jump, 0.0);
    CHECK(next.velocity.y <= 0.0);
    CHECK(next.jump_cooldown == doctest::Approx(0.3 - kDt));
}

TEST_CASE("walking into a disabled block passes through") {
    Scenario scn = make_flat_world();
    scn.blocks.push_back({{{22, 0, 15}, {23, 3, 25}}, SurfaceClass::Solid, false});
    CharacterState s = rest_state({21, 0, 20});
    ActionCommand fwd;
    fwd.forward = 1.0;  // heading 0 faces +x
    for (int k = 0; k < 30; ++k) s = step(scn, s, fwd, k * kDt);
    CHECK(s.position.x > 23.5);

    SUBCASE("the enabled twin blocks the same walk") {
        Scenario walled = make_flat_world();
        walled.blocks.push_back({{{22, 0, 15}, {23, 3, 25}}, SurfaceClass::Solid, true});
        CharacterState w = rest_state({21, 0, 20});
        for (int k = 0; k < 30; ++k) w = step(walled, w, fwd, k * kDt);
        CHECK(w.position.x == doctest::Approx(22.0 - kCharHalfWidth));
    }
}

TEST_CASE("character never penetrates enabled solid blocks under fuzzed actions") {
    std::mt19937_64 rng(20260810);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> pos01(0.0, 1.0);

    for (int scene = 0; scene < 20; ++scene) {
        Scenario scn = make_flat_world();
        for (int b = 0; b < 12; ++b) {
            const double x = 4 + pos01(rng) * 30, z = 4 + pos01(rng) * 30;
            const double w = 0.4 + pos01(rng) * 4, d = 0.4 + pos01(rng) * 4;
            const double h = 0.3 + pos01(rng) * 5;
            scn.blocks.push_back({{{x, 0, z}, {x + w, h, z + d}}, SurfaceClass::Solid, true});
        }
        CharacterState s = rest_state({20, 2, 20});
        s.ground_contact = false;
        for (int k = 0; k < 400; ++k) {
            ActionCommand a;
            a.forward = unit(rng);
            a.turn = unit(rng);
            a.strafe = unit(rng);
            a.jump = pos01(rng) < 0.5;
            s = step(scn, s, a, k * kDt);
            const Aabb body = character_box(s.position);
            for (const Block& b : scn.blocks) {
                if (!b.collision_enabled) continue;
                const Aabb shrunk = b.box.expanded(-1e-6);
                CAPTURE(k);
                REQUIRE(!body.overlaps(shrunk));
            }
        }
    }
}

TEST_CASE("climbable face carries the character upward while pushed") {
    Scenario scn = make_flat_world();
    scn.blocks.push_back({{{25, 0, 10}, {33, 8, 30}}, SurfaceClass::Climbable, true});
    CharacterState s = rest_state({24, 0, 20});
    ActionCommand push;
    push.forward = 1.0;
    bool climbed = false;
    for (int k = 0; k < 400 && !climbed; ++k) {
        s = step(scn, s, push, k * kDt);
        if (s.is_climbing) CHECK(s.velocity.y == kClimbSpeed);
        climbed = s.position.y > 8.0;
    }
    CHECK(climbed);
    // tops out and walks onto the block
    for (int k = 0; k < 40; ++k) s = step(scn, s, push, (400 + k) * kDt);
    CHECK(s.position.y == doctest::Approx(8.0));
    CHECK(s.ground_contact);
    CHECK(!s.is_climbing);
}

TEST_CASE("stuck trap freezes on contact and stays frozen") {
    Scenario scn = make_flat_world();
    scn.blocks.push_back({{{24, 0, 18}, {25, 0.3, 22}}, SurfaceClass::StuckTrap, true});
    CharacterState s = rest_state({22, 0, 20});
    ActionCommand fwd;
    fwd.forward = 1.0;
    int frozen_at = -1;
    for (int k = 0; k < 200; ++k) {
        s = step(scn, s, fwd, k * kDt);
        if (s.frozen) {
            frozen_at = k;
            break;
        }
    }
    REQUIRE(frozen_at >= 0);
    const Vec3 frozen_pos = s.position;
    for (int k = 0; k < 20; ++k) {
        s = step(scn, s, fwd, (frozen_at + 1 + k) * kDt);
        CHECK(s.frozen);
        CHECK(s.velocity == Vec3{0, 0, 0});
        CHECK(s.position == frozen_pos);
    }
}

TEST_CASE("elevator carries a standing character through its cycle") {
    Scenario scn = make_flat_world();
    Elevator e;
    e.platform = {{18, -0.4, 18}, {21, 0.0, 21}};
    e.waypoints = {{19.5, -0.2, 19.5}, {19.5, 9.8, 19.5}};
    e.speed = 2.0;
    scn.elevators.push_back(e);

    CharacterState s = rest_state({19.5, 0.0, 19.5});
    for (int k = 0; k < 150; ++k) {
        s = step(scn, s, ActionCommand{}, k * kDt);
        CHECK(s.ground_contact);
    }
    // 3 simulated seconds at 2 m/s
    CHECK(s.position.y == doctest::Approx(6.0).epsilon(0.02));
    CHECK(s.position.x == doctest::Approx(19.5));
}

TEST_CASE("raycast hits a wall three meters ahead") {
    Scenario scn;
    scn.name = "ray";
    scn.bounds = {{-50, -50, -50}, {50, 50, 50}};
    scn.exploration_boundary = scn.bounds;
    scn.initial_spawn = {0, 0, 0};
    scn.blocks.push_back({{{3, -10, -10}, {4, 10, 10}}, SurfaceClass::Solid, true});

    const RaycastHit hit = raycast(scn, {0, 0, 0}, {1, 0, 0}, 20.0);
    CHECK(hit.distance == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(hit.hit == HitClass::Solid);

    SUBCASE("empty space returns max_len and none") {
        const RaycastHit miss = raycast(scn, {0, 0, 0}, {-1, 0, 0}, 20.0);
        CHECK(miss.distance == 20.0);
        CHECK(miss.hit == HitClass::None);
    }
    SUBCASE("disabled segment is invisible to rays") {
        scn.blocks.push_back({{{1, -10, -10}, {2, 10, 10}}, SurfaceClass::Solid, false});
        const RaycastHit through = raycast(scn, {0, 0, 0}, {1, 0, 0}, 20.0);
        CHECK(through.distance == doctest::Approx(3.0).epsilon(1e-9));
        CHECK(through.hit == HitClass::Solid);
    }
    SUBCASE("non-unit directions are rejected") {
        CHECK_THROWS_AS(raycast(scn, {0, 0, 0}, {1, 1, 0}, 20.0), std::invalid_argument);
    }
}

TEST_CASE("raycast agrees with the face-plane oracle on random scenes") {
    std::mt19937_64 rng(7771);
    std::uniform_real_distribution<double> coord(-20.0, 20.0);
    std::uniform_real_distribution<double> size(0.2, 8.0);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    for (int scene = 0; scene < 1000; ++scene) {
        Scenario scn;
        scn.name = "fuzz";
        scn.bounds = {{-100, -100, -100}, {100, 100, 100}};
        scn.exploration_boundary = scn.bounds;
        scn.initial_spawn = {0, 0, 0};
        const int blocks = 1 + scene % 6;
        for (int b = 0; b < blocks; ++b) {
            const Vec3 lo{coord(rng), coord(rng), coord(rng)};
            scn.blocks.push_back(
                {{lo, lo + Vec3{size(rng), size(rng), size(rng)}}, SurfaceClass::Solid, true});
        }
        Vec3 dir{unit(rng), unit(rng), unit(rng)};
        if (norm(dir) < 1e-3) dir = {1, 0, 0};
        dir = dir * (1.0 / norm(dir));
        const Vec3 origin{coord(rng), coord(rng), coord(rng)};

        const RaycastHit hit = raycast(scn, origin, dir, 40.0);
        double expected = 40.0;
        for (const Block& b : scn.blocks)
            expected = std::min(expected, oracle_ray_box(origin, dir, b.box, 40.0));
        REQUIRE(std::abs(hit.distance - expected) <= 1e-6);
    }
}

TEST_CASE("non-finite inputs are contract violations") {
    const Scenario scn = make_flat_world();
    CharacterState s = rest_state({20, 0, 20});
    s.position.x = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(step(scn, s, ActionCommand{}, 0.0), std::invalid_argument);

    ActionCommand bad;
    bad.forward = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(step(scn, rest_state({20, 0, 20}), bad, 0.0), std::invalid_argument);
}
