#include "tgcut/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "tgcut/error.hpp"
#include "tgcut/session.hpp"

namespace tgcut {

Point2 PhantomSpec::centerline(int z) const {
    if (drift_period <= 0.0) return center;
    const double phase = 2.0 * std::numbers::pi * z / drift_period;
    return {center.x + drift_x * std::sin(phase), center.y + drift_y * std::sin(phase)};
}

double PhantomSpec::radius(int z) const {
    switch (profile) {
    case RadiusProfile::Constant: return r0;
    case RadiusProfile::Cone: {
        if (sizes[2] < 2) return r0;
        return r0 + (r1 - r0) * z / static_cast<double>(sizes[2] - 1);
    }
    case RadiusProfile::Sinusoidal: {
        if (radius_period <= 0.0) return r0;
        return r0 + radius_amplitude * std::sin(2.0 * std::numbers::pi * z / radius_period);
    }
    }
    return r0;
}

void PhantomSpec::validate() const {
    VolumeGeometry{sizes, spacing}.validate();
    if (!(noise_sigma >= 0.0)) throw ArgumentError("noise sigma must be >= 0", "invalid-phantom");
    for (int z = 0; z < static_cast<int>(sizes[2]); ++z) {
        const double r = radius(z);
        if (!(r >= 3.0)) {
            throw ArgumentError("tube radius " + std::to_string(r) + " on slice " + std::to_string(z) +
                                    " is below 3 voxels",
                                "invalid-phantom");
        }
        const Point2 c = centerline(z);
        if (c.x - r < 0.0 || c.y - r < 0.0 || c.x + r > static_cast<double>(sizes[0] - 1) ||
            c.y + r > static_cast<double>(sizes[1] - 1)) {
            throw ArgumentError("tube exits the volume on slice " + std::to_string(z), "invalid-phantom");
        }
    }
}

namespace {

RadiusProfile profile_from(const std::string& s) {
    if (s == "constant") return RadiusProfile::Constant;
    if (s == "cone") return RadiusProfile::Cone;
    if (s == "sinusoidal") return RadiusProfile::Sinusoidal;
    throw ParseError("unknown radius profile \"" + s + "\"", "schema-violation");
}

std::string profile_name(RadiusProfile p) {
    switch (p) {
    case RadiusProfile::Constant: return "constant";
    case RadiusProfile::Cone: return "cone";
    case RadiusProfile::Sinusoidal: return "sinusoidal";
    }
    return "cone";
}

PixelType pixel_type_from(const std::string& s) {
    if (s == "uint8") return PixelType::UInt8;
    if (s == "int16") return PixelType::Int16;
    if (s == "float") return PixelType::Float32;
    throw ParseError("unknown pixel type \"" + s + "\"", "schema-violation");
}

} // namespace

PhantomSpec phantom_from_json(const nlohmann::json& j) {
    PhantomSpec s;
    try {
        if (j.contains("sizes")) s.sizes = j.at("sizes").get<std::array<std::size_t, 3>>();
        if (j.contains("spacing")) s.spacing = j.at("spacing").get<std::array<double, 3>>();
        if (j.contains("center")) {
            const auto c = j.at("center").get<std::array<double, 2>>();
            s.center = {c[0], c[1]};
        } else {
            s.center = {std::floor(s.sizes[0] / 2.0), std::floor(s.sizes[1] / 2.0)};
        }
        if (j.contains("drift")) {
            const auto& d = j.at("drift");
            s.drift_x = d.value("amplitude_x", s.drift_x);
            s.drift_y = d.value("amplitude_y", s.drift_y);
            s.drift_period = d.value("period", static_cast<double>(s.sizes[2]));
        } else {
            s.drift_period = static_cast<double>(s.sizes[2]);
        }
        if (j.contains("radius")) {
            const auto& r = j.at("radius");
            s.profile = profile_from(r.value("profile", std::string("cone")));
            s.r0 = r.value("r0", s.r0);
            s.r1 = r.value("r1", s.r1);
            s.radius_amplitude = r.value("amplitude", s.radius_amplitude);
            s.radius_period = r.value("period", static_cast<double>(s.sizes[2]));
        } else {
            s.radius_period = static_cast<double>(s.sizes[2]);
        }
        s.foreground = j.value("foreground", s.foreground);
        s.background = j.value("background", s.background);
        s.noise_sigma = j.value("noise_sigma", s.noise_sigma);
        s.seed = j.value("seed", s.seed);
        if (j.contains("pixel_type")) s.pixel_type = pixel_type_from(j.at("pixel_type").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("phantom spec: ") + e.what(), "schema-violation");
    }
    s.validate();
    return s;
}

nlohmann::json phantom_to_json(const PhantomSpec& s) {
    return {{"sizes", s.sizes},
            {"spacing", s.spacing},
            {"center", {s.center.x, s.center.y}},
            {"drift", {{"amplitude_x", s.drift_x}, {"amplitude_y", s.drift_y}, {"period", s.drift_period}}},
            {"radius",
             {{"profile", profile_name(s.profile)},
              {"r0", s.r0},
              {"r1", s.r1},
              {"amplitude", s.radius_amplitude},
              {"period", s.radius_period}}},
            {"foreground", s.foreground},
            {"background", s.background},
            {"noise_sigma", s.noise_sigma},
            {"seed", s.seed},
            {"pixel_type", std::string(to_string(s.pixel_type))}};
}

nlohmann::json phantom_session_script(const PhantomSpec& spec, int z0, int step, double template_scale) {
    using nlohmann::json;
    spec.validate();
    const int nz = static_cast<int>(spec.sizes[2]);
    if (z0 < 0 || z0 >= nz) throw IndexError("start slice " + std::to_string(z0) + " outside the phantom");
    if (step < 1) throw ArgumentError("step must be >= 1", "invalid-skip");
    if (!(template_scale > 1.0)) throw ArgumentError("template must enclose the tube", "invalid-scale");

    const Point2 c = spec.centerline(z0);
    const double r = template_scale * spec.radius(z0);
    std::vector<Point2> outline;
    for (int m = 0; m < 24; ++m) {
        const double a = 2.0 * std::numbers::pi * m / 24.0;
        outline.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
    }
    json events = json::array();
    events.push_back({{"type", "start"},
                      {"z0", z0},
                      {"template", points_to_json(outline)},
                      {"seed", {c.x, c.y}},
                      {"params", params_to_json(GraphParams{})},
                      {"t", 0.0}});
    auto advance = [&](int direction, int skip) {
        events.push_back({{"type", "accept_and_advance"}, {"direction", direction}, {"skip", skip}, {"t", 0.0}});
    };
    int z = z0;
    for (; z + step <= nz - 1; z += step) advance(1, step);
    if (z < nz - 1) advance(1, nz - 1 - z);
    z = z0;
    for (; z - step >= 0; z -= step) advance(-1, step);
    if (z > 0) advance(-1, z);
    events.push_back({{"type", "finalize"}, {"t", 0.0}});
    return {{"format", "tgcut-replay"}, {"version", 1}, {"object", "phantom"}, {"events", events}};
}

std::pair<Volume3D, MaskVolume> generate_phantom(const PhantomSpec& spec) {
    spec.validate();
    const VolumeGeometry g{spec.sizes, spec.spacing};
    MaskVolume truth(g);
    std::vector<float> values(g.voxel_count());

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.noise_sigma > 0.0 ? spec.noise_sigma : 1.0);

    for (std::size_t z = 0; z < g.sizes[2]; ++z) {
        const Point2 c = spec.centerline(static_cast<int>(z));
        const double r = spec.radius(static_cast<int>(z));
        for (std::size_t y = 0; y < g.sizes[1]; ++y) {
            for (std::size_t x = 0; x < g.sizes[0]; ++x) {
                const double dx = static_cast<double>(x) - c.x;
                const double dy = static_cast<double>(y) - c.y;
                const bool inside = dx * dx + dy * dy <= r * r;
                truth.set(x, y, z, inside);
                double v = inside ? spec.foreground : spec.background;
                if (spec.noise_sigma > 0.0) v += noise(rng);
                switch (spec.pixel_type) {
                case PixelType::UInt8: v = std::clamp(std::round(v), 0.0, 255.0); break;
                case PixelType::Int16: v = std::clamp(std::round(v), -32768.0, 32767.0); break;
                case PixelType::Float32: break;
                }
                values[g.index(x, y, z)] = static_cast<float>(v);
            }
        }
    }
    return {Volume3D(g, spec.pixel_type, std::move(values)), std::move(truth)};
}

} // namespace tgcut
