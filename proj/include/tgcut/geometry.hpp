#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tgcut/geometry_types.hpp"
#include "tgcut/volume.hpp"

namespace tgcut {

/// Closed marker polygon on one slice that bounds the radial graph.
struct Template {
    std::vector<Point2> markers;
    int z = 0;

    /// Throws ArgumentError on fewer than 3 or non-finite markers.
    void validate() const;
};

struct SeedPoint {
    Point2 position;
    int z = 0;
};

/// k uniform-angle rays from the seed, each ending on the template boundary.
struct RayFan {
    Point2 seed;
    std::vector<double> angles;
    std::vector<Point2> hits;
    std::vector<double> lengths;

    std::size_t size() const { return angles.size(); }
};

/// k rays x n nodes. Node (i, j) sits at seed + ((j + 1) / n) * (hit_i - seed).
struct NodeGrid {
    std::size_t k = 0;
    std::size_t n = 0;
    Point2 seed;
    float seed_grey = 0.0f;
    std::vector<Point2> positions;
    std::vector<float> grey;

    const Point2& position(std::size_t ray, std::size_t node) const { return positions[ray * n + node]; }
    float grey_at(std::size_t ray, std::size_t node) const { return grey[ray * n + node]; }
};

inline constexpr double kMinRayLength = 2.0;

double signed_area(std::span<const Point2> poly);

/// Area-weighted centroid; falls back to the vertex mean for near-zero area.
Point2 centroid(std::span<const Point2> poly);
Point2 centroid(const Template& t);

Template scale_template(const Template& t, double sf, Point2 center);

/// 2*pi*i/k for i in [0, k), counter-clockwise from +x.
std::vector<double> ray_angles(std::size_t k);

/// Even-odd test of a pixel-space point against a closed polygon.
bool point_in_polygon(Point2 p, std::span<const Point2> poly);

/// Shortest distance from `p` to the polygon outline.
double distance_to_boundary(Point2 p, std::span<const Point2> poly);

/// Farthest crossing of the half-line from `seed` at `angle` with the outline.
Point2 intersect_ray_polygon(Point2 seed, double angle, const Template& t);

/// Casts k rays from the seed. Rejects seeds outside the template and rays
/// shorter than kMinRayLength with a GeometryError.
RayFan cast_rays(const Template& t, const SeedPoint& seed, std::size_t k);

NodeGrid sample_node_grid(const RayFan& fan, std::size_t n, const Slice2D& slice,
                          SampleMethod method = SampleMethod::Bilinear);

} // namespace tgcut
