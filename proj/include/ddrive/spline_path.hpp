#pragma once

#include <span>
#include <vector>

#include "ddrive/geometry.hpp"
#include "ddrive/rng.hpp"
#include "ddrive/workspace.hpp"

namespace ddrive {

// Spline control data: fixed endpoints plus n free interior points.
// interior may be empty, in which case the curve degenerates to the
// start-target segment.
struct ControlPolygon {
    Vec2 start;
    Vec2 target;
    std::vector<Vec2> interior;

    // All control points in evaluation order: start, interior..., target.
    std::vector<Vec2> all_points() const;
};

struct SplineConfig {
    int smoothness_k = 3;     // spline degree; higher is smoother
    int sample_count = 200;   // samples per evaluated path
    double path_time = 50.0;  // time to traverse the curve [s]
};

// Uniformly time-sampled curve with finite-difference derivatives.
// times are T*i/(N-1); derivatives are second-order accurate (central in the
// interior, one-sided three/four point stencils at the ends).
struct SampledPath {
    std::vector<double> times;        // [s]
    std::vector<Vec2> points;         // [m]
    std::vector<Vec2> first_deriv;    // [m/s]
    std::vector<Vec2> second_deriv;   // [m/s^2]
    double length = 0.0;              // polyline length [m]

    double duration() const { return times.empty() ? 0.0 : times.back(); }
};

// Per-interior-control-point axis-aligned search boxes, plus the endpoints
// they were derived from.
struct SearchBounds {
    Vec2 start;
    Vec2 target;
    std::vector<Vec2> lower;  // componentwise lower corner, one per point
    std::vector<Vec2> upper;
};

// Builds the search region for n interior control points: n+2 nominal points
// are placed equally spaced on the start->target segment, box i spans nominal
// points i-1..i, is expanded by lateral_margin perpendicular to the segment,
// and clipped to the workspace bounds. A negative margin selects the full
// workspace extent. Throws if start and target coincide.
SearchBounds control_bounds(const Workspace& ws, int n, double lateral_margin = -1.0);

// One uniform draw per box: point = lower + rand*(upper - lower).
ControlPolygon random_control_polygon(const SearchBounds& bounds, Rng& rng);

// Clamped uniform B-spline through [start, interior..., target], evaluated at
// normalized parameter t in [0,1]. The effective degree is
// min(smoothness_k, point_count - 1), so endpoints always interpolate.
// Throws std::domain_error for t outside [0,1].
Vec2 evaluate_spline(const ControlPolygon& polygon, const SplineConfig& cfg, double t);

// Samples the spline at cfg.sample_count uniform parameters mapped to times
// [0, path_time] and attaches finite-difference derivatives and length.
SampledPath sample_path(const ControlPolygon& polygon, const SplineConfig& cfg);

// Polyline length of a point sequence (order-sensitive).
double path_length(std::span<const Vec2> points);
inline double path_length(const SampledPath& path) {
    return path_length(std::span<const Vec2>(path.points));
}

// Evaluating a swarm of candidate paths reuses the same basis matrix: the
// B-spline basis depends only on (point count, degree, sample count), not on
// the control coordinates, so sampling one candidate reduces to a small dense
// matrix product. This is the planner's inner kernel.
class PathSampler {
public:
    PathSampler(Vec2 start, Vec2 target, int interior_count, const SplineConfig& cfg);

    // coords holds interior points as [x1, y1, x2, y2, ...].
    SampledPath sample(std::span<const double> coords) const;
    SampledPath sample(const ControlPolygon& polygon) const;

    int interior_count() const { return interior_count_; }

private:
    Vec2 start_, target_;
    int interior_count_;
    int sample_count_;
    double path_time_;
    int point_count_;              // interior_count_ + 2
    std::vector<double> basis_;    // sample_count_ x point_count_, row-major
};

// Derivatives and length for an externally supplied uniform-time point
// sequence (same stencils as sample_path).
SampledPath attach_derivatives(std::vector<Vec2> points, double total_time);

}  // namespace ddrive
