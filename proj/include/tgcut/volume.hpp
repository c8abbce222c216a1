#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "tgcut/geometry_types.hpp"

namespace tgcut {

enum class PixelType { UInt8, Int16, Float32 };

std::string_view to_string(PixelType t);

/// Voxel counts and physical spacing (mm) shared by images and masks.
struct VolumeGeometry {
    std::array<std::size_t, 3> sizes{1, 1, 1};
    std::array<double, 3> spacing{1.0, 1.0, 1.0};

    std::size_t voxel_count() const { return sizes[0] * sizes[1] * sizes[2]; }
    std::size_t slice_voxels() const { return sizes[0] * sizes[1]; }
    std::size_t index(std::size_t x, std::size_t y, std::size_t z) const {
        return x + sizes[0] * (y + sizes[1] * z);
    }
    void validate() const;

    bool operator==(const VolumeGeometry&) const = default;
};

/// Scalar grey-value volume. Values are held as float regardless of the
/// on-disk pixel type; uint8/int16 round-trip exactly through float.
class Volume3D {
public:
    Volume3D() = default;
    Volume3D(VolumeGeometry geometry, PixelType type, std::vector<float> values);

    const VolumeGeometry& geometry() const { return geometry_; }
    PixelType pixel_type() const { return type_; }
    const std::vector<float>& values() const { return values_; }
    std::size_t nx() const { return geometry_.sizes[0]; }
    std::size_t ny() const { return geometry_.sizes[1]; }
    std::size_t nz() const { return geometry_.sizes[2]; }

    float at(std::size_t x, std::size_t y, std::size_t z) const {
        return values_[geometry_.index(x, y, z)];
    }

private:
    VolumeGeometry geometry_;
    PixelType type_ = PixelType::Float32;
    std::vector<float> values_{0.0f};
};

class MaskVolume {
public:
    MaskVolume() = default;
    explicit MaskVolume(VolumeGeometry geometry);
    MaskVolume(VolumeGeometry geometry, std::vector<std::uint8_t> values);

    const VolumeGeometry& geometry() const { return geometry_; }
    const std::vector<std::uint8_t>& values() const { return values_; }
    std::vector<std::uint8_t>& values() { return values_; }

    bool at(std::size_t x, std::size_t y, std::size_t z) const {
        return values_[geometry_.index(x, y, z)] != 0;
    }
    void set(std::size_t x, std::size_t y, std::size_t z, bool on) {
        values_[geometry_.index(x, y, z)] = on ? 1 : 0;
    }

    bool operator==(const MaskVolume&) const = default;

private:
    VolumeGeometry geometry_;
    std::vector<std::uint8_t> values_{0};
};

/// One axial plane of a volume.
struct Slice2D {
    std::size_t z_index = 0;
    std::size_t nx = 1;
    std::size_t ny = 1;
    std::array<double, 2> spacing{1.0, 1.0};
    std::vector<float> values{0.0f};

    float at(std::size_t x, std::size_t y) const { return values[x + nx * y]; }
};

enum class SampleMethod { Nearest, Bilinear };

Slice2D extract_slice(const Volume3D& vol, std::size_t z);

/// Samples the slice at a continuous pixel coordinate (pixel centres sit on
/// integer coordinates). Points outside the image clamp to the border.
float sample_grey(const Slice2D& slice, Point2 p, SampleMethod method = SampleMethod::Bilinear);

} // namespace tgcut
