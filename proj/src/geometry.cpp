#include "tgcut/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "tgcut/error.hpp"

namespace tgcut {

void Template::validate() const {
    if (markers.size() < 3) {
        throw ArgumentError("template needs at least 3 markers, got " + std::to_string(markers.size()),
                            "too-few-markers");
    }
    for (const auto& m : markers) {
        if (!std::isfinite(m.x) || !std::isfinite(m.y)) {
            throw ArgumentError("template marker is not finite", "non-finite-marker");
        }
    }
}

double signed_area(std::span<const Point2> poly) {
    double twice = 0.0;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        twice += cross(poly[j], poly[i]);
    }
    return 0.5 * twice;
}

Point2 centroid(std::span<const Point2> poly) {
    if (poly.size() < 3) {
        throw ArgumentError("centroid needs at least 3 vertices", "too-few-markers");
    }
    // Shift to the first vertex so large absolute coordinates do not cancel.
    const Point2 origin = poly[0];
    double twice_area = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    double extent = 0.0;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Point2 a = poly[j] - origin;
        const Point2 b = poly[i] - origin;
        const double w = cross(a, b);
        twice_area += w;
        cx += (a.x + b.x) * w;
        cy += (a.y + b.y) * w;
        extent = std::max({extent, std::abs(b.x), std::abs(b.y)});
    }
    if (std::abs(twice_area) <= 1e-12 * std::max(1.0, extent * extent)) {
        Point2 mean;
        for (const auto& p : poly) mean = mean + p;
        return (1.0 / static_cast<double>(poly.size())) * mean;
    }
    return origin + Point2{cx / (3.0 * twice_area), cy / (3.0 * twice_area)};
}

Point2 centroid(const Template& t) {
    t.validate();
    return centroid(std::span<const Point2>(t.markers));
}

Template scale_template(const Template& t, double sf, Point2 center) {
    if (!(sf > 0.0) || !std::isfinite(sf)) {
        throw ArgumentError("scale factor must be positive", "invalid-scale");
    }
    Template out{{}, t.z};
    out.markers.reserve(t.markers.size());
    for (const auto& m : t.markers) out.markers.push_back(center + sf * (m - center));
    return out;
}

std::vector<double> ray_angles(std::size_t k) {
    if (k < 3) throw ArgumentError("need at least 3 rays", "too-few-rays");
    std::vector<double> a(k);
    for (std::size_t i = 0; i < k; ++i) {
        a[i] = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(k);
    }
    return a;
}

bool point_in_polygon(Point2 p, std::span<const Point2> poly) {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Point2& a = poly[j];
        const Point2& b = poly[i];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x_cross) inside = !inside;
        }
    }
    return inside;
}

double distance_to_boundary(Point2 p, std::span<const Point2> poly) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Point2 a = poly[j];
        const Point2 ab = poly[i] - a;
        const double len2 = ab.x * ab.x + ab.y * ab.y;
        double u = 0.0;
        if (len2 > 0.0) u = std::clamp(((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2, 0.0, 1.0);
        best = std::min(best, distance(p, a + u * ab));
    }
    return best;
}

Point2 intersect_ray_polygon(Point2 seed, double angle, const Template& t) {
    t.validate();
    const Point2 dir{std::cos(angle), std::sin(angle)};
    const auto& m = t.markers;

    bool found = false;
    double best_s = 0.0;
    Point2 best;
    for (std::size_t i = 0, j = m.size() - 1; i < m.size(); j = i++) {
        const Point2 a = m[j];
        const Point2 e = m[i] - a;
        const double denom = cross(dir, e);
        if (denom == 0.0) continue;  // parallel; the adjacent edges report the endpoints
        const Point2 w = a - seed;
        const double s = cross(w, e) / denom;    // distance along the ray
        const double u = cross(w, dir) / denom;  // position along the edge
        // rays through a vertex may land a rounding error outside both edges
        constexpr double kEdgeSlack = 1e-12;
        if (u < -kEdgeSlack || u > 1.0 + kEdgeSlack || s <= 0.0) continue;
        if (!found || s > best_s) {
            found = true;
            best_s = s;
            best = a + std::clamp(u, 0.0, 1.0) * e;
        }
    }
    if (!found) {
        throw GeometryError("no-intersection", "ray at angle " + std::to_string(angle) +
                                                   " does not meet the template outline");
    }
    return best;
}

RayFan cast_rays(const Template& t, const SeedPoint& seed, std::size_t k) {
    t.validate();
    if (!std::isfinite(seed.position.x) || !std::isfinite(seed.position.y)) {
        throw ArgumentError("seed point is not finite", "non-finite-seed");
    }
    if (!point_in_polygon(seed.position, t.markers)) {
        throw GeometryError("seed-outside-template", "seed point lies outside the template polygon");
    }
    RayFan fan;
    fan.seed = seed.position;
    fan.angles = ray_angles(k);
    fan.hits.reserve(k);
    fan.lengths.reserve(k);
    for (double angle : fan.angles) {
        const Point2 hit = intersect_ray_polygon(seed.position, angle, t);
        const double len = distance(hit, seed.position);
        if (len < kMinRayLength) {
            throw GeometryError("degenerate-ray", "ray at angle " + std::to_string(angle) +
                                                      " is shorter than " +
                                                      std::to_string(kMinRayLength) + " pixels");
        }
        fan.hits.push_back(hit);
        fan.lengths.push_back(len);
    }
    return fan;
}

NodeGrid sample_node_grid(const RayFan& fan, std::size_t n, const Slice2D& slice, SampleMethod method) {
    if (n < 2) throw ArgumentError("need at least 2 nodes per ray", "too-few-nodes");
    if (fan.hits.size() != fan.angles.size()) throw ArgumentError("ray fan is inconsistent");
    NodeGrid g;
    g.k = fan.size();
    g.n = n;
    g.seed = fan.seed;
    g.seed_grey = sample_grey(slice, fan.seed, method);
    g.positions.reserve(g.k * n);
    g.grey.reserve(g.k * n);
    for (std::size_t i = 0; i < g.k; ++i) {
        const Point2 span = fan.hits[i] - fan.seed;
        for (std::size_t j = 0; j < n; ++j) {
            const Point2 p = j + 1 == n ? fan.hits[i]
                                        : fan.seed + (static_cast<double>(j + 1) / static_cast<double>(n)) * span;
            g.positions.push_back(p);
            g.grey.push_back(sample_grey(slice, p, method));
        }
    }
    return g;
}

} // namespace tgcut
