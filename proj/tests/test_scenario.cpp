#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "pedsim/errors.hpp"
#include "pedsim/geometry.hpp"
#include "pedsim/scenario.hpp"

using namespace pedsim;
using doctest::Approx;

namespace {

bool has_wall(const Scenario& s, Vec2 a, Vec2 b) {
    for (const auto& w : s.walls) {
        if ((dist(w.a, a) < 1e-12 && dist(w.b, b) < 1e-12) ||
            (dist(w.a, b) < 1e-12 && dist(w.b, a) < 1e-12))
            return true;
    }
    return false;
}

}  // namespace

TEST_CASE("bottleneck geometry is built from the configured dimensions") {
    const Scenario s = build_bottleneck_scenario(0.8);

    CHECK(s.width == 0.8);
    CHECK(std::min(s.opening_a.y, s.opening_b.y) == Approx(-0.4).epsilon(1e-12));
    CHECK(std::max(s.opening_a.y, s.opening_b.y) == Approx(0.4).epsilon(1e-12));
    CHECK(s.opening_a.x == 0.0);
    CHECK(s.opening_b.x == 0.0);

    CHECK(s.measurement_line == Approx(0.4));
    CHECK(s.removal_line == Approx(1.4));
    CHECK(s.walls.size() == 6);

    // passage walls line the bottleneck depth
    CHECK(has_wall(s, {0, 0.4}, {0.4, 0.4}));
    CHECK(has_wall(s, {0, -0.4}, {0.4, -0.4}));
    // flank walls close the entrance plane outside the opening
    CHECK(has_wall(s, {0, 0.4}, {0, 2.0}));
    CHECK(has_wall(s, {0, -0.4}, {0, -2.0}));

    // spawn region: 100 pedestrians at 3/m^2 across 4 m width -> 25/3 m deep
    const double depth = 100.0 / (3.0 * 4.0);
    CHECK(s.spawn_region.hi.x == Approx(-2.5).epsilon(1e-12));
    CHECK(s.spawn_region.lo.x == Approx(-2.5 - depth).epsilon(1e-12));
    CHECK(s.spawn_region.lo.y == Approx(-2.0).epsilon(1e-12));
    CHECK(s.spawn_region.hi.y == Approx(2.0).epsilon(1e-12));

    // corridor walls reach one meter behind the spawn region
    CHECK(has_wall(s, {-(2.5 + depth + 1.0), 2.0}, {0, 2.0}));
    CHECK(has_wall(s, {-(2.5 + depth + 1.0), -2.0}, {0, -2.0}));

    // solid regions cover the flank blocks and the space beyond the corridor
    REQUIRE(s.solid_regions.size() == 4);
    CHECK(s.solid_regions[0].contains({0.2, 1.0}));    // upper flank block
    CHECK(s.solid_regions[1].contains({0.2, -1.0}));   // lower flank block
    CHECK(!s.solid_regions[0].contains({0.2, 0.39}));  // the passage is open
    CHECK(!s.solid_regions[0].contains({0.5, 1.0}));   // downstream is open
    bool above = false, below = false;
    for (const Rect& r : s.solid_regions) {
        above = above || r.contains({-3.0, 2.5});
        below = below || r.contains({-3.0, -2.5});
    }
    CHECK(above);
    CHECK(below);
    // legal interior points are in no solid
    for (const Rect& r : s.solid_regions) {
        CHECK(!r.contains({-3.0, 0.0}));
        CHECK(!r.contains({0.2, 0.0}));
        CHECK(!r.contains({1.0, 1.0}));
    }
}

TEST_CASE("narrowest study width still gives a centered opening") {
    const Scenario s = build_bottleneck_scenario(0.4);
    CHECK(std::min(s.opening_a.y, s.opening_b.y) == Approx(-0.2).epsilon(1e-12));
    CHECK(std::max(s.opening_a.y, s.opening_b.y) == Approx(0.2).epsilon(1e-12));
}

TEST_CASE("geometry is symmetric about the corridor axis") {
    const Scenario s = build_bottleneck_scenario(0.6);
    for (const auto& w : s.walls)
        CHECK(has_wall(s, {w.a.x, -w.a.y}, {w.b.x, -w.b.y}));
    // every wall records which side pedestrians occupy
    for (const auto& w : s.walls) {
        REQUIRE(w.outward_side.has_value());
        CHECK(w.outward_side->norm() == Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("rect interior depth measures distance to the nearest edge") {
    const Rect r{{0.0, 0.0}, {4.0, 2.0}};
    CHECK(r.interior_depth({1.0, 1.0}) == 1.0);
    CHECK(r.interior_depth({3.7, 1.0}) == Approx(0.3).epsilon(1e-12));
    CHECK(r.interior_depth({2.0, 0.1}) == Approx(0.1).epsilon(1e-12));
    CHECK(r.interior_depth({5.0, 1.0}) == 0.0);  // outside
    CHECK(r.interior_depth({4.0, 1.0}) == 0.0);  // on the boundary
}

TEST_CASE("degenerate configurations are rejected") {
    // as wide as the corridor (or wider): no constriction left
    CHECK_THROWS_AS((void)build_bottleneck_scenario(4.0), InputError);
    CHECK_THROWS_AS((void)build_bottleneck_scenario(4.3), InputError);
    CHECK_THROWS_AS((void)build_bottleneck_scenario(0.0), InputError);
    CHECK_THROWS_AS((void)build_bottleneck_scenario(-0.4), InputError);
    // just below the corridor width still constricts (5 cm flanks)
    CHECK(build_bottleneck_scenario(3.9).width == 3.9);

    GeometryConfig bad;
    bad.spawn_density = 0.0;
    CHECK_THROWS_AS((void)build_bottleneck_scenario(0.8, bad), InputError);
    bad = GeometryConfig{};
    bad.removal_offset = -1.0;
    CHECK_THROWS_AS((void)build_bottleneck_scenario(0.8, bad), InputError);
}

TEST_CASE("passability requires a body diameter of clearance") {
    const Scenario wide = build_bottleneck_scenario(0.4);
    CHECK(passable(wide, 0.15));
    CHECK_FALSE(passable(wide, 0.2));   // diameter equals the width
    CHECK_FALSE(passable(wide, 0.25));
}

TEST_CASE("spawning fills the region with clearance and zero velocity") {
    const Scenario s = build_bottleneck_scenario(1.0);
    const ModelParams p;
    const auto peds = spawn_pedestrians(s, 100, p, 42);

    REQUIRE(peds.size() == 100);
    for (std::size_t k = 0; k < peds.size(); ++k) {
        const auto& q = peds[k];
        CHECK(q.id == std::uint32_t(k));
        CHECK(q.velocity == Vec2{0, 0});
        CHECK(q.desired_speed == 1.34);
        CHECK(q.radius == 0.15);
        CHECK_FALSE(q.exited);
        CHECK_FALSE(q.passage_time.has_value());
        CHECK(s.spawn_region.contains(q.position));
        for (const auto& w : s.walls)
            CHECK(point_segment_distance(q.position, w.a, w.b) >= p.radius - 1e-12);
    }
    for (std::size_t a = 0; a < peds.size(); ++a)
        for (std::size_t b = a + 1; b < peds.size(); ++b)
            CHECK(dist(peds[a].position, peds[b].position) >= 2 * p.radius - 1e-12);
}

TEST_CASE("spawning is a pure function of scenario, count, params and seed") {
    const Scenario s = build_bottleneck_scenario(0.7);
    const ModelParams p;

    const auto a = spawn_pedestrians(s, 50, p, 7);
    const auto b = spawn_pedestrians(s, 50, p, 7);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].position == b[k].position);
        CHECK(a[k].desired_speed == b[k].desired_speed);
    }

    const auto c = spawn_pedestrians(s, 50, p, 8);
    bool any_differs = false;
    for (std::size_t k = 0; k < a.size(); ++k)
        any_differs = any_differs || !(a[k].position == c[k].position);
    CHECK(any_differs);
}

TEST_CASE("a lone spawned pedestrian starts at rest") {
    const Scenario s = build_bottleneck_scenario(1.0);
    const auto peds = spawn_pedestrians(s, 1, ModelParams{}, 1);
    REQUIRE(peds.size() == 1);
    CHECK(peds[0].velocity == Vec2{0, 0});
}

TEST_CASE("speed spread draws per-pedestrian desired speeds deterministically") {
    const Scenario s = build_bottleneck_scenario(1.0);
    ModelParams p;
    p.desired_speed_sd = 0.26;

    const auto a = spawn_pedestrians(s, 40, p, 3);
    const auto b = spawn_pedestrians(s, 40, p, 3);
    bool any_spread = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].desired_speed == b[k].desired_speed);
        CHECK(a[k].desired_speed >= 0.1);  // floor against non-physical draws
        any_spread = any_spread || a[k].desired_speed != 1.34;
    }
    CHECK(any_spread);
}

TEST_CASE("an overfull spawn region fails loudly instead of looping forever") {
    GeometryConfig g;
    g.spawn_width = 0.4;
    g.spawn_density = 100.0;  // 20 peds in 0.5 x 0.4 m cannot hold r=0.15 disks
    const Scenario s = build_bottleneck_scenario(0.8, g, 20);
    CHECK_THROWS_AS((void)spawn_pedestrians(s, 20, ModelParams{}, 1), InputError);
}

TEST_CASE("routing targets the inset opening upstream and +x downstream") {
    const Scenario s = build_bottleneck_scenario(0.4);
    PedestrianState ped;
    ped.radius = 0.15;

    ped.position = {-2.5, 0.0};
    CHECK(desired_direction(ped, s) == Vec2{1, 0});

    ped.position = {1.0, 0.3};
    CHECK(desired_direction(ped, s) == Vec2{1, 0});

    ped.position = {0.0, 0.3};  // entrance plane counts as downstream
    CHECK(desired_direction(ped, s) == Vec2{1, 0});

    // off-axis upstream: aims at the nearest end of the opening inset by the
    // body radius (width 0.4, r 0.15 -> inset opening spans y in [-0.05, 0.05])
    ped.position = {-2.5, 1.5};
    const Vec2 e = desired_direction(ped, s);
    CHECK(e.x == Approx(0.8650311892618034).epsilon(1e-9));
    CHECK(e.y == Approx(-0.501718089771846).epsilon(1e-9));

    ped.position = {-2.5, -1.5};
    const Vec2 mirrored = desired_direction(ped, s);
    CHECK(mirrored.x == Approx(e.x).epsilon(1e-12));
    CHECK(mirrored.y == Approx(-e.y).epsilon(1e-12));

    PedestrianState gone;
    gone.exited = true;
    CHECK_THROWS_AS((void)desired_direction(gone, s), ContractError);
}

TEST_CASE("routing collapses to the opening center when bodies barely fit") {
    const Scenario s = build_bottleneck_scenario(0.4);
    PedestrianState ped;
    ped.radius = 0.25;  // wider than the half-opening: inset clamps to a point
    ped.position = {-1.0, 1.0};
    const Vec2 e = desired_direction(ped, s);
    const Vec2 expect = Vec2{1.0, -1.0} / std::sqrt(2.0);
    CHECK(e.x == Approx(expect.x).epsilon(1e-12));
    CHECK(e.y == Approx(expect.y).epsilon(1e-12));
}

TEST_CASE("routing always yields a unit vector") {
    const Scenario s = build_bottleneck_scenario(0.5);
    std::mt19937 rng(55);
    std::uniform_real_distribution<double> ux(-10.0, 2.0);
    std::uniform_real_distribution<double> uy(-2.0, 2.0);
    PedestrianState ped;
    for (int c = 0; c < 1000; ++c) {
        ped.position = {ux(rng), uy(rng)};
        CHECK(desired_direction(ped, s).norm() == Approx(1.0).epsilon(1e-9));
    }
}
