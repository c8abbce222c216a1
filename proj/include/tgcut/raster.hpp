#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tgcut/contours.hpp"
#include "tgcut/geometry_types.hpp"
#include "tgcut/volume.hpp"

namespace tgcut {

/// Even-odd scanline fill: pixel (x, y) is set iff its centre lies inside
/// the polygon under the same crossing rule as point_in_polygon.
std::vector<std::uint8_t> rasterize_polygon(std::span<const Point2> poly, std::size_t nx, std::size_t ny);

/// Rasterises every contour onto its slice. Contours on slices outside the
/// volume raise an IndexError.
MaskVolume voxelize(const ContourSet& contours, const VolumeGeometry& geometry);

} // namespace tgcut
