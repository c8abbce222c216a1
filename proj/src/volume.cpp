#include "tgcut/volume.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tgcut/error.hpp"

namespace tgcut {

std::string_view to_string(PixelType t) {
    switch (t) {
    case PixelType::UInt8: return "uint8";
    case PixelType::Int16: return "int16";
    case PixelType::Float32: return "float";
    }
    return "unknown";
}

void VolumeGeometry::validate() const {
    for (int a = 0; a < 3; ++a) {
        if (sizes[a] < 1) {
            throw ArgumentError("volume size along axis " + std::to_string(a) + " must be >= 1");
        }
        if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a])) {
            throw ArgumentError("volume spacing along axis " + std::to_string(a) +
                                " must be positive and finite");
        }
    }
}

Volume3D::Volume3D(VolumeGeometry geometry, PixelType type, std::vector<float> values)
    : geometry_(geometry), type_(type), values_(std::move(values)) {
    geometry_.validate();
    if (values_.size() != geometry_.voxel_count()) {
        throw ArgumentError("value count " + std::to_string(values_.size()) +
                            " does not match volume size " +
                            std::to_string(geometry_.voxel_count()));
    }
}

MaskVolume::MaskVolume(VolumeGeometry geometry)
    : geometry_(geometry), values_(geometry.voxel_count(), 0) {
    geometry_.validate();
}

MaskVolume::MaskVolume(VolumeGeometry geometry, std::vector<std::uint8_t> values)
    : geometry_(geometry), values_(std::move(values)) {
    geometry_.validate();
    if (values_.size() != geometry_.voxel_count()) {
        throw ArgumentError("mask value count does not match geometry");
    }
    for (auto& v : values_) {
        if (v > 1) throw ArgumentError("mask values must be 0 or 1");
    }
}

Slice2D extract_slice(const Volume3D& vol, std::size_t z) {
    if (z >= vol.nz()) {
        throw IndexError("slice " + std::to_string(z) + " outside volume with " +
                         std::to_string(vol.nz()) + " slices");
    }
    const auto& g = vol.geometry();
    Slice2D s;
    s.z_index = z;
    s.nx = g.sizes[0];
    s.ny = g.sizes[1];
    s.spacing = {g.spacing[0], g.spacing[1]};
    const auto first = vol.values().begin() + static_cast<std::ptrdiff_t>(z * g.slice_voxels());
    s.values.assign(first, first + static_cast<std::ptrdiff_t>(g.slice_voxels()));
    return s;
}

float sample_grey(const Slice2D& slice, Point2 p, SampleMethod method) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw ArgumentError("sample point is not finite");
    }
    const double x = std::clamp(p.x, 0.0, static_cast<double>(slice.nx - 1));
    const double y = std::clamp(p.y, 0.0, static_cast<double>(slice.ny - 1));

    if (method == SampleMethod::Nearest) {
        return slice.at(static_cast<std::size_t>(std::lround(x)),
                        static_cast<std::size_t>(std::lround(y)));
    }

    const auto x0 = static_cast<std::size_t>(std::floor(x));
    const auto y0 = static_cast<std::size_t>(std::floor(y));
    const std::size_t x1 = std::min(x0 + 1, slice.nx - 1);
    const std::size_t y1 = std::min(y0 + 1, slice.ny - 1);
    const double fx = x - static_cast<double>(x0);
    const double fy = y - static_cast<double>(y0);

    const double top = (1.0 - fx) * slice.at(x0, y0) + fx * slice.at(x1, y0);
    const double bottom = (1.0 - fx) * slice.at(x0, y1) + fx * slice.at(x1, y1);
    return static_cast<float>((1.0 - fy) * top + fy * bottom);
}

} // namespace tgcut
