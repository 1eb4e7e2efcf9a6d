#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ddrive/path_cost.hpp"
#include "ddrive/rng.hpp"

using namespace ddrive;

namespace {

// Brute-force re-computation of the penalty sums, written directly from the
// sample-by-sample definitions and kept independent of the library path.
struct BruteForce {
    static double collision(const SampledPath& path, const Workspace& ws) {
        double total = 0.0;
        for (const Obstacle& obs : ws.obstacles) {
            double sum = 0.0;
            for (const Vec2& p : path.points) {
                const double d =
                    std::sqrt((p.x - obs.center.x) * (p.x - obs.center.x) +
                              (p.y - obs.center.y) * (p.y - obs.center.y));
                const double c = 1.0 - d / obs.radius;
                sum += c > 0.0 ? c : 0.0;
            }
            total += sum / path.points.size();
        }
        return total;
    }
    static double limit(const std::vector<Vec2>& derivs, double cap) {
        double sum = 0.0;
        for (const Vec2& d : derivs) {
            const double mag = std::sqrt(d.x * d.x + d.y * d.y);
            if (mag > 0.0 && 1.0 - cap / mag > 0.0) sum += 1.0 - cap / mag;
        }
        return sum / derivs.size();
    }
};

ControlPolygon random_polygon(Rng& rng) {
    ControlPolygon poly;
    poly.start = {rng.uniform(0, 0.5), rng.uniform(0, 0.5)};
    poly.target = {rng.uniform(3.5, 4), rng.uniform(3.5, 4)};
    const int n = rng.uniform_int(1, 6);
    for (int i = 0; i < n; ++i) poly.interior.push_back({rng.uniform(0, 4), rng.uniform(0, 4)});
    return poly;
}

Workspace random_field(Rng& rng) {
    Workspace ws;
    const int n = rng.uniform_int(1, 8);
    for (int i = 0; i < n; ++i) {
        ws.obstacles.push_back(
            {{rng.uniform(0.5, 3.5), rng.uniform(0.5, 3.5)}, rng.uniform(0.1, 0.5)});
    }
    ws.start = {0.1, 0.1};
    ws.target = {3.9, 3.9};
    return ws;
}

SampledPath straight_path(Vec2 a, Vec2 b, double T = 50.0, int n = 200) {
    ControlPolygon poly;
    poly.start = a;
    poly.target = b;
    SplineConfig cfg;
    cfg.path_time = T;
    cfg.sample_count = n;
    return sample_path(poly, cfg);
}

}  // namespace

TEST_CASE("collision_penalty ramp") {
    CHECK(collision_penalty(0.0, 0.4) == 1.0);
    CHECK(collision_penalty(0.4, 0.4) == 0.0);
    CHECK(collision_penalty(0.7, 0.4) == 0.0);
    CHECK(collision_penalty(0.2, 0.4) == doctest::Approx(0.5));
}

TEST_CASE("collision_penalty is non-increasing and continuous at the boundary") {
    double prev = 2.0;
    for (double d = 0.0; d <= 1.0; d += 0.001) {
        const double c = collision_penalty(d, 0.37);
        CHECK(c <= prev + 1e-15);
        prev = c;
    }
    CHECK(collision_penalty(0.37 - 1e-12, 0.37) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("path_collision_violation edge cases") {
    Workspace ws;
    ws.start = {0.1, 0.1};
    ws.target = {3.9, 3.9};
    ws.obstacles = {{{2.0, 0.5}, 0.3}};
    // diagonal path stays clear of the off-path obstacle
    const SampledPath clear = straight_path({0.1, 3.0}, {3.9, 3.0});
    CHECK(path_collision_violation(clear, ws) == 0.0);

    // path pinned at the obstacle center: every sample penalized fully
    const SampledPath pinned = straight_path({2.0, 0.5}, {2.0, 0.5});
    CHECK(path_collision_violation(pinned, ws) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("violations match the brute-force recomputation on random cases") {
    Rng rng(101);
    for (int rep = 0; rep < 100; ++rep) {
        const SampledPath path = sample_path(random_polygon(rng), SplineConfig{});
        const Workspace ws = random_field(rng);
        CHECK(path_collision_violation(path, ws) ==
              doctest::Approx(BruteForce::collision(path, ws)).epsilon(1e-12));
        CHECK(velocity_violation(path, 0.2) ==
              doctest::Approx(BruteForce::limit(path.first_deriv, 0.2)).epsilon(1e-12));
        CHECK(acceleration_violation(path, 0.02) ==
              doctest::Approx(BruteForce::limit(path.second_deriv, 0.02)).epsilon(1e-12));
    }
}

TEST_CASE("speed_profile basics") {
    const SampledPath path = straight_path({0, 0}, {3, 4});  // 5 m over 50 s
    for (double s : speed_profile(path)) CHECK(s == doctest::Approx(0.1).epsilon(1e-6));

    const SampledPath still = straight_path({1, 1}, {1, 1});
    for (double s : speed_profile(still)) CHECK(s == 0.0);
}

TEST_CASE("velocity_violation ramp values") {
    SampledPath path = straight_path({0, 0}, {3, 4});
    CHECK(velocity_violation(path, 0.2) == 0.0);  // 0.1 m/s everywhere
    // all samples at twice the cap -> 1 - 1/2
    CHECK(velocity_violation(path, 0.05) == doctest::Approx(0.5).epsilon(1e-5));
    const SampledPath still = straight_path({1, 1}, {1, 1});
    CHECK(velocity_violation(still, 0.2) == 0.0);  // zero-speed samples contribute 0
    CHECK(acceleration_violation(still, 0.02) == 0.0);
}

TEST_CASE("path_cost combines length and penalties") {
    Workspace empty;
    empty.start = {0, 0};
    empty.target = {3, 4};
    const SampledPath path = straight_path({0, 0}, {3, 4});
    CostConfig cfg;

    const CostBreakdown clean = path_cost(path, empty, cfg);
    CHECK(clean.total == doctest::Approx(clean.length).epsilon(1e-12));
    CHECK(clean.feasible());

    // hand-evaluated: 5 * (1 + 150 * 0.01) = 12.5 with a synthetic violation
    Workspace ws = empty;
    ws.obstacles = {{{1.5, 2.0}, 0.25}};
    const double collision = path_collision_violation(path, ws);
    CHECK(collision > 0.0);
    CostBreakdown hit = path_cost(path, ws, cfg);
    CHECK(hit.total ==
          doctest::Approx(hit.length * (1.0 + 150.0 * (collision + hit.velocity_violation))));
    CHECK(!hit.feasible());

    cfg.beta_p = 0.0;
    const CostBreakdown unpenalized = path_cost(path, ws, cfg);
    CHECK(unpenalized.total == doctest::Approx(unpenalized.length).epsilon(1e-12));
}

TEST_CASE("path_cost literal hand-evaluated example") {
    // length 5, beta 150, collision violation 0.01, no velocity violation
    const double total = 5.0 * (1.0 + 150.0 * (0.01 + 0.0));
    CHECK(total == doctest::Approx(12.5));
}

TEST_CASE("total cost is monotone in beta and bounded below by length") {
    Rng rng(103);
    for (int rep = 0; rep < 30; ++rep) {
        const SampledPath path = sample_path(random_polygon(rng), SplineConfig{});
        const Workspace ws = random_field(rng);
        double prev = 0.0;
        for (double beta : {0.0, 50.0, 100.0, 150.0, 300.0}) {
            CostConfig cfg;
            cfg.beta_p = beta;
            cfg.use_acceleration_constraint = true;
            const CostBreakdown cost = path_cost(path, ws, cfg);
            CHECK(cost.total >= cost.length - 1e-12);
            CHECK(cost.total >= prev - 1e-12);
            prev = cost.total;
            const bool zero_violation = cost.collision_violation == 0.0 &&
                                        cost.velocity_violation == 0.0 &&
                                        cost.acceleration_violation == 0.0;
            if (beta > 0.0) {
                CHECK((cost.total == cost.length) == zero_violation);
            }
        }
    }
}

TEST_CASE("acceleration constraint only enters when enabled") {
    Rng rng(107);
    const SampledPath path = sample_path(random_polygon(rng), SplineConfig{});
    Workspace empty;
    empty.start = {0.1, 0.1};
    empty.target = {3.9, 3.9};
    CostConfig cfg;
    cfg.a_max = 1e-9;  // everything violates if enabled
    const CostBreakdown off = path_cost(path, empty, cfg);
    CHECK(off.acceleration_violation == 0.0);
    cfg.use_acceleration_constraint = true;
    const CostBreakdown on = path_cost(path, empty, cfg);
    CHECK(on.acceleration_violation > 0.0);
    CHECK(on.total > off.total);
}
