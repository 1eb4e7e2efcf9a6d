#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ddrive/rng.hpp"
#include "ddrive/spline_path.hpp"

using namespace ddrive;

namespace {

// ---- independent oracle: textbook recursive basis and its derivative ----

std::vector<double> oracle_knots(int m, int deg) {
    std::vector<double> knots(m + deg + 1, 0.0);
    const int spans = m - deg;
    for (int i = 1; i < spans; ++i) knots[deg + i] = static_cast<double>(i) / spans;
    for (int i = m; i < m + deg + 1; ++i) knots[i] = 1.0;
    return knots;
}

double oracle_basis(int i, int p, double t, const std::vector<double>& knots) {
    if (p == 0) {
        // half-open spans, closed at the very end of the curve
        if (t == 1.0) return knots[i] < 1.0 && knots[i + 1] == 1.0 ? 1.0 : 0.0;
        return knots[i] <= t && t < knots[i + 1] ? 1.0 : 0.0;
    }
    double left = 0.0, right = 0.0;
    if (knots[i + p] > knots[i]) {
        left = (t - knots[i]) / (knots[i + p] - knots[i]) * oracle_basis(i, p - 1, t, knots);
    }
    if (knots[i + p + 1] > knots[i + 1]) {
        right = (knots[i + p + 1] - t) / (knots[i + p + 1] - knots[i + 1]) *
                oracle_basis(i + 1, p - 1, t, knots);
    }
    return left + right;
}

Vec2 oracle_point(const std::vector<Vec2>& pts, int deg, double t) {
    const int m = static_cast<int>(pts.size());
    const auto knots = oracle_knots(m, deg);
    Vec2 out{0, 0};
    for (int i = 0; i < m; ++i) out += pts[i] * oracle_basis(i, deg, t, knots);
    return out;
}

// dC/dt via the degree-(p-1) difference curve.
Vec2 oracle_derivative(const std::vector<Vec2>& pts, int deg, double t) {
    const int m = static_cast<int>(pts.size());
    const auto knots = oracle_knots(m, deg);
    std::vector<Vec2> q(m - 1);
    for (int i = 0; i < m - 1; ++i) {
        q[i] = (pts[i + 1] - pts[i]) * (deg / (knots[i + deg + 1] - knots[i + 1]));
    }
    const std::vector<double> dknots(knots.begin() + 1, knots.end() - 1);
    Vec2 out{0, 0};
    for (int i = 0; i < m - 1; ++i) out += q[i] * oracle_basis(i, deg - 1, t, dknots);
    return out;
}

ControlPolygon random_polygon(Rng& rng, int n_interior) {
    ControlPolygon poly;
    poly.start = {rng.uniform(0, 1), rng.uniform(0, 1)};
    poly.target = {rng.uniform(3, 4), rng.uniform(3, 4)};
    for (int i = 0; i < n_interior; ++i) {
        poly.interior.push_back({rng.uniform(0, 4), rng.uniform(0, 4)});
    }
    return poly;
}

Workspace plain_field(Vec2 start, Vec2 target) {
    Workspace ws;
    ws.start = start;
    ws.target = target;
    return ws;
}

}  // namespace

TEST_CASE("control_bounds nominal boxes span consecutive nominal points") {
    const Workspace ws = plain_field({0, 0}, {4, 0});
    const SearchBounds b = control_bounds(ws, 1, 0.0);
    REQUIRE(b.lower.size() == 1);
    CHECK(b.lower[0].x == doctest::Approx(0.0));
    CHECK(b.lower[0].y == doctest::Approx(0.0));
    CHECK(b.upper[0].x == doctest::Approx(2.0));
    CHECK(b.upper[0].y == doctest::Approx(0.0));
}

TEST_CASE("control_bounds clips to the workspace") {
    const Workspace ws = plain_field({0, 0}, {4, 0});
    const SearchBounds b = control_bounds(ws, 3, 4.0);
    for (std::size_t i = 0; i < b.lower.size(); ++i) {
        CHECK(b.lower[i].x >= 0.0);
        CHECK(b.lower[i].y >= 0.0);
        CHECK(b.upper[i].x <= 4.0);
        CHECK(b.upper[i].y <= 4.0);
        CHECK(b.lower[i].y == doctest::Approx(0.0));  // saturated at bounds
        CHECK(b.upper[i].y == doctest::Approx(4.0));
    }
}

TEST_CASE("control_bounds boxes progress monotonically along the segment axis") {
    Rng rng(3);
    for (int rep = 0; rep < 50; ++rep) {
        const Workspace ws =
            plain_field({rng.uniform(0, 1.5), rng.uniform(0, 4)},
                        {rng.uniform(2.5, 4), rng.uniform(0, 4)});
        const int n = rng.uniform_int(2, 6);
        const SearchBounds b = control_bounds(ws, n, rng.uniform(0, 4));
        const Vec2 axis = (ws.target - ws.start) / (ws.target - ws.start).norm();
        double prev = -1e30;
        for (int i = 0; i < n; ++i) {
            const double low_proj =
                std::min({dot({b.lower[i].x, b.lower[i].y}, axis),
                          dot({b.lower[i].x, b.upper[i].y}, axis),
                          dot({b.upper[i].x, b.lower[i].y}, axis),
                          dot({b.upper[i].x, b.upper[i].y}, axis)});
            CHECK(low_proj >= prev - 1e-12);
            prev = low_proj;
        }
    }
}

TEST_CASE("control_bounds rejects coincident endpoints") {
    const Workspace ws = plain_field({1, 1}, {1, 1});
    CHECK_THROWS_AS(control_bounds(ws, 3, 1.0), std::invalid_argument);
}

TEST_CASE("random_control_polygon stays inside its boxes") {
    const Workspace ws = plain_field({0.2, 0.3}, {3.7, 3.6});
    const SearchBounds b = control_bounds(ws, 5, 1.0);
    Rng rng(8);
    for (int rep = 0; rep < 1000; ++rep) {
        const ControlPolygon poly = random_control_polygon(b, rng);
        REQUIRE(poly.interior.size() == 5);
        for (int i = 0; i < 5; ++i) {
            CHECK(poly.interior[i].x >= b.lower[i].x);
            CHECK(poly.interior[i].x <= b.upper[i].x);
            CHECK(poly.interior[i].y >= b.lower[i].y);
            CHECK(poly.interior[i].y <= b.upper[i].y);
        }
    }
}

TEST_CASE("random_control_polygon degenerate box returns the corner") {
    SearchBounds b;
    b.start = {0, 0};
    b.target = {4, 4};
    b.lower = {{1.25, 2.5}};
    b.upper = {{1.25, 2.5}};
    Rng rng(1);
    const ControlPolygon poly = random_control_polygon(b, rng);
    CHECK(poly.interior[0].x == 1.25);
    CHECK(poly.interior[0].y == 2.5);
}

TEST_CASE("evaluate_spline interpolates the endpoints exactly") {
    Rng rng(17);
    SplineConfig cfg;
    for (int rep = 0; rep < 50; ++rep) {
        const ControlPolygon poly = random_polygon(rng, rng.uniform_int(1, 7));
        const Vec2 p0 = evaluate_spline(poly, cfg, 0.0);
        const Vec2 p1 = evaluate_spline(poly, cfg, 1.0);
        CHECK(p0.x == doctest::Approx(poly.start.x).epsilon(1e-12));
        CHECK(p0.y == doctest::Approx(poly.start.y).epsilon(1e-12));
        CHECK(p1.x == doctest::Approx(poly.target.x).epsilon(1e-12));
        CHECK(p1.y == doctest::Approx(poly.target.y).epsilon(1e-12));
    }
    CHECK_THROWS_AS(evaluate_spline(random_polygon(rng, 2), cfg, 1.0001), std::domain_error);
    CHECK_THROWS_AS(evaluate_spline(random_polygon(rng, 2), cfg, -0.1), std::domain_error);
}

TEST_CASE("evaluate_spline collinear control points stay on the line") {
    ControlPolygon poly;
    poly.start = {0, 0};
    poly.target = {4, 2};
    poly.interior = {{1, 0.5}, {2, 1}, {2.4, 1.2}, {3, 1.5}};
    SplineConfig cfg;
    for (double t = 0.0; t <= 1.0; t += 0.01) {
        const Vec2 p = evaluate_spline(poly, cfg, t);
        CHECK(std::abs(p.y - 0.5 * p.x) < 1e-12);
    }
}

TEST_CASE("evaluate_spline degree-1 is the piecewise-linear interpolant") {
    ControlPolygon poly;
    poly.start = {0, 0};
    poly.target = {2, 0};
    poly.interior = {{1, 1}};
    SplineConfig cfg;
    cfg.smoothness_k = 1;
    // knots [0,0,.5,1,1]; midway through the first span blends P0 and P1 equally
    const Vec2 p = evaluate_spline(poly, cfg, 0.25);
    CHECK(p.x == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.y == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("evaluate_spline agrees with the recursive-definition oracle") {
    Rng rng(29);
    for (int rep = 0; rep < 20; ++rep) {
        const ControlPolygon poly = random_polygon(rng, rng.uniform_int(1, 6));
        SplineConfig cfg;
        cfg.smoothness_k = rng.uniform_int(1, 4);
        const std::vector<Vec2> pts = poly.all_points();
        const int deg = std::min<int>(cfg.smoothness_k, static_cast<int>(pts.size()) - 1);
        for (double t : {0.0, 0.123, 0.5, 0.75, 0.9999, 1.0}) {
            const Vec2 lib = evaluate_spline(poly, cfg, t);
            const Vec2 ora = oracle_point(pts, deg, t);
            CHECK(lib.x == doctest::Approx(ora.x).epsilon(1e-12));
            CHECK(lib.y == doctest::Approx(ora.y).epsilon(1e-12));
        }
    }
}

TEST_CASE("sample_path of a bare segment moves at constant speed") {
    ControlPolygon segment;
    segment.start = {0, 0};
    segment.target = {3, 4};
    SplineConfig cfg;  // T = 50, N = 200
    const SampledPath path = sample_path(segment, cfg);
    CHECK(path.length == doctest::Approx(5.0).epsilon(1e-6));
    for (const Vec2& d : path.first_deriv) {
        CHECK(d.norm() == doctest::Approx(0.1).epsilon(1e-6));
    }
    CHECK(path.times.front() == 0.0);
    CHECK(path.times.back() == doctest::Approx(50.0));
}

TEST_CASE("sample_path length approaches an analytic circle") {
    // control points on the unit circle; the spline hugs it from inside
    ControlPolygon poly;
    const int n = 40;
    poly.start = {1, 0};
    poly.target = {1, 0};
    for (int k = 1; k < n; ++k) {
        const double a = 2.0 * M_PI * k / n;
        poly.interior.push_back({std::cos(a), std::sin(a)});
    }
    SplineConfig cfg;
    cfg.sample_count = 1000;
    const SampledPath path = sample_path(poly, cfg);
    CHECK(path.length == doctest::Approx(2.0 * M_PI).epsilon(0.01));
}

TEST_CASE("sample_path length is converged in the sample count") {
    Rng rng(31);
    const ControlPolygon poly = random_polygon(rng, 5);
    SplineConfig cfg;
    cfg.sample_count = 400;
    const double len1 = sample_path(poly, cfg).length;
    cfg.sample_count = 800;
    const double len2 = sample_path(poly, cfg).length;
    CHECK(std::abs(len2 - len1) < 1e-4 * std::max(1.0, len1));
}

TEST_CASE("sampled points stay inside the control-point convex hull") {
    Rng rng(37);
    for (int rep = 0; rep < 20; ++rep) {
        const ControlPolygon poly = random_polygon(rng, 5);
        const SampledPath path = sample_path(poly, SplineConfig{});
        const std::vector<Vec2> hull_pts = poly.all_points();
        // inside iff on the inner side of every edge of the hull
        std::vector<Vec2> hull = hull_pts;
        std::sort(hull.begin(), hull.end(), [](const Vec2& a, const Vec2& b) {
            return a.x < b.x || (a.x == b.x && a.y < b.y);
        });
        auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
            return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
        };
        std::vector<Vec2> chain;
        for (int pass = 0; pass < 2; ++pass) {
            const std::size_t base = chain.size();
            for (const Vec2& p : hull) {
                while (chain.size() >= base + 2 &&
                       cross(chain[chain.size() - 2], chain.back(), p) <= 0) {
                    chain.pop_back();
                }
                chain.push_back(p);
            }
            chain.pop_back();
            std::reverse(hull.begin(), hull.end());
        }
        for (const Vec2& p : path.points) {
            for (std::size_t i = 0; i < chain.size(); ++i) {
                const Vec2& a = chain[i];
                const Vec2& b = chain[(i + 1) % chain.size()];
                const double side = cross(a, b, p);
                const double edge_len = distance(a, b);
                CHECK(side >= -1e-9 * std::max(1.0, edge_len));
            }
        }
    }
}

TEST_CASE("finite-difference first derivatives converge at second order") {
    Rng rng(41);
    const ControlPolygon poly = random_polygon(rng, 5);
    const std::vector<Vec2> pts = poly.all_points();
    const int deg = 3;

    auto max_error = [&](int samples) {
        SplineConfig cfg;
        cfg.sample_count = samples;
        const SampledPath path = sample_path(poly, cfg);
        double worst = 0.0;
        for (int j = 0; j < samples; ++j) {
            const double t = static_cast<double>(j) / (samples - 1);
            // chain rule: d/dt_phys = (1/T) d/dt_param
            const Vec2 exact = oracle_derivative(pts, deg, t) / cfg.path_time;
            worst = std::max(worst, (path.first_deriv[j] - exact).norm());
        }
        return worst;
    };
    const double e1 = max_error(100);
    const double e2 = max_error(200);
    const double ratio = e1 / e2;
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.5);
}

TEST_CASE("path_length basics") {
    const Vec2 two[] = {{0, 0}, {3, 4}};
    CHECK(path_length(std::span<const Vec2>(two, 2)) == doctest::Approx(5.0));
    const Vec2 same[] = {{1, 1}, {1, 1}, {1, 1}};
    CHECK(path_length(std::span<const Vec2>(same, 3)) == 0.0);
    const Vec2 ordered[] = {{0, 0}, {1, 0}, {1, 1}};
    const Vec2 permuted[] = {{0, 0}, {1, 1}, {1, 0}};
    CHECK(path_length(std::span<const Vec2>(ordered, 3)) !=
          path_length(std::span<const Vec2>(permuted, 3)));
}

TEST_CASE("path length is at least the endpoint distance") {
    Rng rng(43);
    for (int rep = 0; rep < 50; ++rep) {
        const ControlPolygon poly = random_polygon(rng, rng.uniform_int(1, 6));
        const SampledPath path = sample_path(poly, SplineConfig{});
        CHECK(path.length >= distance(poly.start, poly.target) - 1e-9);
    }
}

TEST_CASE("translation equivariance") {
    Rng rng(47);
    const ControlPolygon poly = random_polygon(rng, 5);
    const Vec2 shift{1.75, -0.5};
    ControlPolygon moved = poly;
    moved.start += shift;
    moved.target += shift;
    for (Vec2& p : moved.interior) p += shift;

    const SampledPath a = sample_path(poly, SplineConfig{});
    const SampledPath b = sample_path(moved, SplineConfig{});
    CHECK(b.length == doctest::Approx(a.length).epsilon(1e-12));
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(b.points[i].x == doctest::Approx(a.points[i].x + shift.x).epsilon(1e-12));
        CHECK(b.points[i].y == doctest::Approx(a.points[i].y + shift.y).epsilon(1e-12));
    }
}

TEST_CASE("time scaling divides speeds by c and accelerations by c^2") {
    Rng rng(53);
    const ControlPolygon poly = random_polygon(rng, 5);
    SplineConfig cfg;
    cfg.path_time = 25.0;
    const SampledPath fast = sample_path(poly, cfg);
    cfg.path_time = 50.0;
    const SampledPath slow = sample_path(poly, cfg);
    for (std::size_t i = 0; i < fast.points.size(); ++i) {
        CHECK(slow.first_deriv[i].norm() ==
              doctest::Approx(fast.first_deriv[i].norm() / 2.0).epsilon(1e-9));
        CHECK(slow.second_deriv[i].norm() ==
              doctest::Approx(fast.second_deriv[i].norm() / 4.0).epsilon(1e-9));
    }
}
