#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>

#include <json.hpp>

#include "tgcut/geometry_types.hpp"
#include "tgcut/volume.hpp"

namespace tgcut {

enum class RadiusProfile { Constant, Cone, Sinusoidal };

/// Synthetic bright tube in a dark volume with known ground truth.
struct PhantomSpec {
    std::array<std::size_t, 3> sizes{128, 128, 24};
    std::array<double, 3> spacing{1.0, 1.0, 3.0};
    Point2 center{64.0, 64.0};
    double drift_x = 8.0;       // centreline amplitude along x (voxels)
    double drift_y = 0.0;       // centreline amplitude along y (voxels)
    double drift_period = 24.0; // slices per full sinusoid; <= 0 disables drift
    RadiusProfile profile = RadiusProfile::Cone;
    double r0 = 10.0;           // radius at z = 0 (and base radius for the other profiles)
    double r1 = 16.0;           // radius at the last slice for the cone profile
    double radius_amplitude = 0.0;
    double radius_period = 24.0;
    double foreground = 200.0;
    double background = 50.0;
    double noise_sigma = 0.0;
    std::uint64_t seed = 1;
    PixelType pixel_type = PixelType::Int16;

    Point2 centerline(int z) const;
    double radius(int z) const;
    /// Throws ArgumentError when the spec is inconsistent or the tube exits the volume.
    void validate() const;
};

PhantomSpec phantom_from_json(const nlohmann::json& j);
nlohmann::json phantom_to_json(const PhantomSpec& spec);

/// Replay document that segments the phantom: a 24-gon of `template_scale`
/// times the true radius around the true centre on z0, advances of `step`
/// slices up to the last slice and down to slice 0, then finalize.
nlohmann::json phantom_session_script(const PhantomSpec& spec, int z0 = 1, int step = 2, double template_scale = 1.5);

/// Volume and ground-truth mask. A voxel belongs to the tube iff its centre
/// lies within radius(z) of centerline(z). Deterministic per seed.
std::pair<Volume3D, MaskVolume> generate_phantom(const PhantomSpec& spec);

} // namespace tgcut
