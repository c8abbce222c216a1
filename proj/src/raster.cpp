#include "tgcut/raster.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tgcut/error.hpp"

namespace tgcut {

std::vector<std::uint8_t> rasterize_polygon(std::span<const Point2> poly, std::size_t nx, std::size_t ny) {
    std::vector<std::uint8_t> out(nx * ny, 0);
    if (poly.size() < 3) return out;

    double ymin = poly[0].y;
    double ymax = poly[0].y;
    for (const auto& p : poly) {
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const auto row_lo = static_cast<long>(std::max(0.0, std::floor(ymin)));
    const auto row_hi = static_cast<long>(std::min(static_cast<double>(ny) - 1.0, std::ceil(ymax)));

    std::vector<double> crossings;
    for (long row = row_lo; row <= row_hi; ++row) {
        const double y = static_cast<double>(row);
        crossings.clear();
        for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
            const Point2& a = poly[j];
            const Point2& b = poly[i];
            if ((a.y > y) != (b.y > y)) crossings.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
        }
        std::sort(crossings.begin(), crossings.end());
        for (std::size_t c = 0; c + 1 < crossings.size(); c += 2) {
            const double first = std::max(0.0, std::ceil(crossings[c]));
            const double last = std::min(static_cast<double>(nx) - 1.0, std::ceil(crossings[c + 1]) - 1.0);
            for (auto x = static_cast<long>(first); x <= static_cast<long>(last); ++x) {
                out[static_cast<std::size_t>(x) + nx * static_cast<std::size_t>(row)] = 1;
            }
        }
    }
    return out;
}

MaskVolume voxelize(const ContourSet& contours, const VolumeGeometry& geometry) {
    MaskVolume mask(geometry);
    const std::size_t nx = geometry.sizes[0];
    const std::size_t ny = geometry.sizes[1];
    for (const auto& [z, contour] : contours.slices) {
        if (z < 0 || static_cast<std::size_t>(z) >= geometry.sizes[2]) {
            throw IndexError("contour on slice " + std::to_string(z) + " lies outside the volume");
        }
        const auto plane = rasterize_polygon(contour.vertices, nx, ny);
        std::copy(plane.begin(), plane.end(),
                  mask.values().begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(z) * nx * ny));
    }
    return mask;
}

} // namespace tgcut
