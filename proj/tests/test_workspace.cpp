#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "ddrive/rng.hpp"
#include "ddrive/workspace.hpp"

using namespace ddrive;

namespace {

const char* kMinimalDoc = R"({
  "version": 1,
  "bounds": {"x_min": 0, "x_max": 4, "y_min": 0, "y_max": 4},
  "start": [0.2, 0.2],
  "target": [3.8, 3.8],
  "obstacles": []
})";

}  // namespace

TEST_CASE("load_workspace accepts an obstacle-free field") {
    const Workspace ws = load_workspace(kMinimalDoc);
    CHECK(ws.obstacles.empty());
    CHECK(ws.start.x == 0.2);
    CHECK(ws.target.y == 3.8);
}

TEST_CASE("load_workspace rejects a start inside an obstacle") {
    const char* doc = R"({
      "version": 1,
      "bounds": {"x_min": 0, "x_max": 4, "y_min": 0, "y_max": 4},
      "start": [1.0, 1.0],
      "target": [3.8, 3.8],
      "obstacles": [
        {"center": [3.0, 3.0], "radius": 0.3},
        {"center": [2.0, 2.0], "radius": 0.3},
        {"center": [1.1, 1.0], "radius": 0.4}
      ]
    })";
    CHECK_THROWS_WITH_AS(load_workspace(doc), "start inside obstacle 3",
                         std::invalid_argument);
}

TEST_CASE("load_workspace rejects malformed documents") {
    CHECK_THROWS_AS(load_workspace("not json"), std::runtime_error);
    CHECK_THROWS_AS(load_workspace("{\"version\": 99}"), std::runtime_error);
}

TEST_CASE("serialize/load round-trips a workspace") {
    Workspace ws;
    ws.start = {0.31, 0.77};
    ws.target = {3.123456789012345, 2.5};
    ws.obstacles = {{{1.5, 2.25}, 0.4},
                    {{0.1234567890123456, 3.3}, 0.125}};
    ws.validate();
    const Workspace back = load_workspace(serialize_workspace(ws));
    CHECK(back.start.x == ws.start.x);
    CHECK(back.target.x == ws.target.x);
    REQUIRE(back.obstacles.size() == ws.obstacles.size());
    for (std::size_t i = 0; i < ws.obstacles.size(); ++i) {
        CHECK(back.obstacles[i].center.x == ws.obstacles[i].center.x);
        CHECK(back.obstacles[i].center.y == ws.obstacles[i].center.y);
        CHECK(back.obstacles[i].radius == ws.obstacles[i].radius);
    }
}

TEST_CASE("random_workspace is deterministic per seed") {
    RandomWorkspaceConfig cfg;
    cfg.seed = 1234;
    const Workspace a = random_workspace(cfg);
    const Workspace b = random_workspace(cfg);
    REQUIRE(a.obstacles.size() == b.obstacles.size());
    CHECK(a.start.x == b.start.x);
    CHECK(a.target.y == b.target.y);
    for (std::size_t i = 0; i < a.obstacles.size(); ++i) {
        CHECK(a.obstacles[i].center.x == b.obstacles[i].center.x);
        CHECK(a.obstacles[i].radius == b.obstacles[i].radius);
    }
}

TEST_CASE("random_workspace samples stay in the configured ranges") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        RandomWorkspaceConfig cfg;
        cfg.seed = seed;
        const Workspace ws = random_workspace(cfg);
        CHECK(ws.obstacles.size() >= 5);
        CHECK(ws.obstacles.size() <= 10);
        for (const Obstacle& obs : ws.obstacles) {
            CHECK(obs.radius >= 0.1);
            CHECK(obs.radius <= 0.5);
            CHECK(obs.center.x >= 0.5);
            CHECK(obs.center.x <= 3.5);
            CHECK(obs.center.y >= 0.5);
            CHECK(obs.center.y <= 3.5);
        }
        CHECK_NOTHROW(ws.validate());  // start/target clear of all obstacles
    }
}

TEST_CASE("random_workspace degenerate radius range") {
    RandomWorkspaceConfig cfg;
    cfg.radius_min = cfg.radius_max = 0.1;
    cfg.seed = 5;
    const Workspace ws = random_workspace(cfg);
    for (const Obstacle& obs : ws.obstacles) CHECK(obs.radius == 0.1);
}

TEST_CASE("distance_to_obstacle") {
    const Obstacle obs{{3.0, 4.0}, 0.5};
    CHECK(distance_to_obstacle(3.0, 4.0, obs) == 0.0);
    CHECK(distance_to_obstacle(0.0, 0.0, obs) == doctest::Approx(5.0));
    CHECK(distance_to_obstacle(3.0, 4.5, obs) == doctest::Approx(obs.radius));
}

TEST_CASE("distance_to_obstacle symmetry and triangle inequality") {
    Rng rng(99);
    for (int i = 0; i < 200; ++i) {
        const Vec2 p{rng.uniform(0, 4), rng.uniform(0, 4)};
        const Vec2 c1{rng.uniform(0, 4), rng.uniform(0, 4)};
        const Vec2 c2{rng.uniform(0, 4), rng.uniform(0, 4)};
        const Obstacle o1{c1, 0.1}, o2{c2, 0.1};
        const Obstacle swapped{{p.x, p.y}, 0.1};
        CHECK(distance_to_obstacle(p.x, p.y, o1) ==
              doctest::Approx(distance_to_obstacle(c1.x, c1.y, swapped)));
        CHECK(distance_to_obstacle(p.x, p.y, o1) <=
              distance_to_obstacle(p.x, p.y, o2) + distance(c2, c1) + 1e-12);
    }
}
