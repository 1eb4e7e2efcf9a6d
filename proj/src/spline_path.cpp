#include "ddrive/spline_path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ddrive {

std::vector<Vec2> ControlPolygon::all_points() const {
    std::vector<Vec2> pts;
    pts.reserve(interior.size() + 2);
    pts.push_back(start);
    pts.insert(pts.end(), interior.begin(), interior.end());
    pts.push_back(target);
    return pts;
}

namespace {

// Clamped uniform knot vector: deg+1 zeros, uniform interior, deg+1 ones.
std::vector<double> clamped_knots(int point_count, int degree) {
    const int n_knots = point_count + degree + 1;
    std::vector<double> knots(n_knots, 0.0);
    const int spans = point_count - degree;  // number of nonempty spans
    for (int i = 1; i < spans; ++i) {
        knots[degree + i] = static_cast<double>(i) / spans;
    }
    for (int i = point_count; i < n_knots; ++i) knots[i] = 1.0;
    return knots;
}

int find_span(int point_count, int degree, double t, const std::vector<double>& knots) {
    if (t >= knots[point_count]) return point_count - 1;  // t == 1 lands in the last span
    int lo = degree, hi = point_count;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (t < knots[mid] ? hi : lo) = mid;
    }
    return lo;
}

// Nonzero basis values N_{span-deg..span} at t (triangular recurrence).
void basis_funs(int span, double t, int degree, const std::vector<double>& knots,
                double* out) {
    double left[16], right[16];
    out[0] = 1.0;
    for (int j = 1; j <= degree; ++j) {
        left[j] = t - knots[span + 1 - j];
        right[j] = knots[span + j] - t;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double temp = out[r] / (right[r + 1] + left[j - r]);
            out[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        out[j] = saved;
    }
}

int effective_degree(int smoothness_k, int point_count) {
    if (smoothness_k < 1) throw std::invalid_argument("spline degree must be >= 1");
    return std::min(smoothness_k, point_count - 1);
}

}  // namespace

SearchBounds control_bounds(const Workspace& ws, int n, double lateral_margin) {
    if (n < 1) throw std::invalid_argument("control_bounds: need n >= 1");
    const Vec2 seg = ws.target - ws.start;
    const double seg_len = seg.norm();
    if (seg_len < 1e-12) {
        throw std::invalid_argument("control_bounds: start and target coincide");
    }
    const double margin =
        lateral_margin < 0.0 ? std::max(ws.width(), ws.height()) : lateral_margin;
    const Vec2 normal = perp(seg / seg_len);

    SearchBounds bounds;
    bounds.start = ws.start;
    bounds.target = ws.target;
    bounds.lower.resize(n);
    bounds.upper.resize(n);
    auto nominal = [&](int i) { return ws.start + seg * (static_cast<double>(i) / (n + 1)); };
    for (int i = 1; i <= n; ++i) {
        const Vec2 a = nominal(i - 1);
        const Vec2 b = nominal(i);
        const Vec2 corners[4] = {a + normal * margin, a - normal * margin,
                                 b + normal * margin, b - normal * margin};
        Vec2 lo = corners[0], hi = corners[0];
        for (const Vec2& c : corners) {
            lo.x = std::min(lo.x, c.x);
            lo.y = std::min(lo.y, c.y);
            hi.x = std::max(hi.x, c.x);
            hi.y = std::max(hi.y, c.y);
        }
        bounds.lower[i - 1] = {clamp(lo.x, ws.x_min, ws.x_max), clamp(lo.y, ws.y_min, ws.y_max)};
        bounds.upper[i - 1] = {clamp(hi.x, ws.x_min, ws.x_max), clamp(hi.y, ws.y_min, ws.y_max)};
    }
    return bounds;
}

ControlPolygon random_control_polygon(const SearchBounds& bounds, Rng& rng) {
    ControlPolygon polygon;
    polygon.start = bounds.start;
    polygon.target = bounds.target;
    polygon.interior.reserve(bounds.lower.size());
    for (std::size_t i = 0; i < bounds.lower.size(); ++i) {
        const double x = bounds.lower[i].x + rng.u01() * (bounds.upper[i].x - bounds.lower[i].x);
        const double y = bounds.lower[i].y + rng.u01() * (bounds.upper[i].y - bounds.lower[i].y);
        polygon.interior.push_back({x, y});
    }
    return polygon;
}

Vec2 evaluate_spline(const ControlPolygon& polygon, const SplineConfig& cfg, double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw std::domain_error("evaluate_spline: t must lie in [0,1]");
    }
    const std::vector<Vec2> pts = polygon.all_points();
    const int m = static_cast<int>(pts.size());
    const int deg = effective_degree(cfg.smoothness_k, m);
    const std::vector<double> knots = clamped_knots(m, deg);
    const int span = find_span(m, deg, t, knots);
    double N[16];
    basis_funs(span, t, deg, knots, N);
    Vec2 out{0.0, 0.0};
    for (int r = 0; r <= deg; ++r) {
        out += pts[span - deg + r] * N[r];
    }
    return out;
}

PathSampler::PathSampler(Vec2 start, Vec2 target, int interior_count, const SplineConfig& cfg)
    : start_(start),
      target_(target),
      interior_count_(interior_count),
      sample_count_(cfg.sample_count),
      path_time_(cfg.path_time),
      point_count_(interior_count + 2) {
    if (interior_count < 0) throw std::invalid_argument("PathSampler: interior_count < 0");
    if (sample_count_ < std::max(4, 2 * point_count_)) {
        throw std::invalid_argument("PathSampler: sample_count too small");
    }
    if (!(path_time_ > 0.0)) throw std::invalid_argument("PathSampler: path_time must be > 0");
    const int deg = effective_degree(cfg.smoothness_k, point_count_);
    if (deg > 15) throw std::invalid_argument("PathSampler: degree too large");
    const std::vector<double> knots = clamped_knots(point_count_, deg);

    basis_.assign(static_cast<std::size_t>(sample_count_) * point_count_, 0.0);
    double N[16];
    for (int j = 0; j < sample_count_; ++j) {
        const double t = static_cast<double>(j) / (sample_count_ - 1);
        const int span = find_span(point_count_, deg, t, knots);
        basis_funs(span, t, deg, knots, N);
        for (int r = 0; r <= deg; ++r) {
            basis_[static_cast<std::size_t>(j) * point_count_ + (span - deg + r)] = N[r];
        }
    }
}

SampledPath PathSampler::sample(std::span<const double> coords) const {
    if (coords.size() != static_cast<std::size_t>(2 * interior_count_)) {
        throw std::invalid_argument("PathSampler: coordinate count mismatch");
    }
    std::vector<Vec2> points(sample_count_);
    for (int j = 0; j < sample_count_; ++j) {
        const double* row = basis_.data() + static_cast<std::size_t>(j) * point_count_;
        double px = row[0] * start_.x + row[point_count_ - 1] * target_.x;
        double py = row[0] * start_.y + row[point_count_ - 1] * target_.y;
        for (int i = 0; i < interior_count_; ++i) {
            px += row[i + 1] * coords[2 * i];
            py += row[i + 1] * coords[2 * i + 1];
        }
        points[j] = {px, py};
    }
    return attach_derivatives(std::move(points), path_time_);
}

SampledPath PathSampler::sample(const ControlPolygon& polygon) const {
    std::vector<double> coords;
    coords.reserve(2 * polygon.interior.size());
    for (const Vec2& p : polygon.interior) {
        coords.push_back(p.x);
        coords.push_back(p.y);
    }
    return sample(coords);
}

SampledPath sample_path(const ControlPolygon& polygon, const SplineConfig& cfg) {
    PathSampler sampler(polygon.start, polygon.target,
                        static_cast<int>(polygon.interior.size()), cfg);
    return sampler.sample(polygon);
}

SampledPath attach_derivatives(std::vector<Vec2> points, double total_time) {
    const int n = static_cast<int>(points.size());
    if (n < 4) throw std::invalid_argument("attach_derivatives: need at least 4 points");
    const double h = total_time / (n - 1);

    SampledPath path;
    path.times.resize(n);
    path.first_deriv.resize(n);
    path.second_deriv.resize(n);
    for (int i = 0; i < n; ++i) path.times[i] = i * h;

    const auto& p = points;
    for (int i = 1; i < n - 1; ++i) {
        path.first_deriv[i] = (p[i + 1] - p[i - 1]) / (2.0 * h);
        path.second_deriv[i] = (p[i + 1] - p[i] * 2.0 + p[i - 1]) / (h * h);
    }
    path.first_deriv[0] = (p[0] * -3.0 + p[1] * 4.0 - p[2]) / (2.0 * h);
    path.first_deriv[n - 1] = (p[n - 1] * 3.0 - p[n - 2] * 4.0 + p[n - 3]) / (2.0 * h);
    path.second_deriv[0] = (p[0] * 2.0 - p[1] * 5.0 + p[2] * 4.0 - p[3]) / (h * h);
    path.second_deriv[n - 1] =
        (p[n - 1] * 2.0 - p[n - 2] * 5.0 + p[n - 3] * 4.0 - p[n - 4]) / (h * h);

    path.length = path_length(std::span<const Vec2>(p));
    path.points = std::move(points);
    return path;
}

double path_length(std::span<const Vec2> points) {
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        len += distance(points[i], points[i + 1]);
    }
    return len;
}

}  // namespace ddrive
