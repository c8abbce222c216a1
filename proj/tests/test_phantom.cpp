#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "tgcut/error.hpp"
#include "tgcut/metrics.hpp"
#include "tgcut/phantom.hpp"
#include "tgcut/raster.hpp"

using namespace tgcut;

TEST_CASE("default phantom") {
    const PhantomSpec spec;
    CHECK(spec.sizes == std::array<std::size_t, 3>{128, 128, 24});
    CHECK(spec.radius(0) == 10.0);
    CHECK(spec.radius(23) == 16.0);
    CHECK(spec.centerline(0) == Point2{64, 64});
    CHECK(spec.centerline(6).x == doctest::Approx(72.0));
    const auto [vol, truth] = generate_phantom(spec);
    CHECK(vol.pixel_type() == PixelType::Int16);
    CHECK(vol.geometry() == truth.geometry());
    std::set<float> greys(vol.values().begin(), vol.values().end());
    CHECK(greys == std::set<float>{50.0f, 200.0f});
    for (std::size_t i = 0; i < vol.values().size(); ++i) {
        CHECK((vol.values()[i] == 200.0f) == (truth.values()[i] == 1));
    }
}

TEST_CASE("a centred radius-10 disk holds 317 voxels") {
    PhantomSpec spec;
    spec.sizes = {40, 40, 1};
    spec.center = {20, 20};
    spec.drift_period = 0;
    spec.profile = RadiusProfile::Constant;
    const auto truth = generate_phantom(spec).second;
    CHECK(volume_stats(truth).voxels == 317);
}

TEST_CASE("truth mask is the per-voxel distance rule") {
    PhantomSpec spec;
    spec.sizes = {60, 50, 7};
    spec.center = {30.3, 24.8};
    spec.drift_x = 4;
    spec.drift_y = 2.5;
    spec.drift_period = 7;
    spec.r0 = 6;
    spec.r1 = 12;
    const auto truth = generate_phantom(spec).second;
    for (std::size_t z = 0; z < 7; ++z) {
        const double cx = 30.3 + 4 * std::sin(2 * std::numbers::pi * double(z) / 7);
        const double cy = 24.8 + 2.5 * std::sin(2 * std::numbers::pi * double(z) / 7);
        const double r = 6 + 6 * double(z) / 6;
        for (std::size_t y = 0; y < 50; ++y)
            for (std::size_t x = 0; x < 60; ++x)
                CHECK((truth.at(x, y, z) == 1) == (std::hypot(double(x) - cx, double(y) - cy) <= r + 1e-12));
    }
}

TEST_CASE("fine polygons of the tube cross-section voxelize to the truth") {
    PhantomSpec spec;
    spec.sizes = {64, 64, 6};
    spec.center = {32, 32};
    spec.drift_period = 6;
    spec.drift_x = 4;
    spec.r0 = 7.3;
    spec.r1 = 12.1;
    const auto truth = generate_phantom(spec).second;
    ContourSet cs;
    for (int z = 0; z < 6; ++z) {
        cs.put({z, Provenance::Computed, oracle::circle_polygon(spec.centerline(z), spec.radius(z), 4096)});
    }
    // a 4096-gon differs from the circle by < 1e-5 voxels; no voxel centre sits that close to the rim here
    CHECK(voxelize(cs, truth.geometry()) == truth);
}

TEST_CASE("noise and determinism") {
    PhantomSpec spec;
    spec.noise_sigma = 15;
    spec.seed = 42;
    const auto a = generate_phantom(spec).first;
    const auto b = generate_phantom(spec).first;
    CHECK(a.values() == b.values());
    spec.seed = 43;
    CHECK(generate_phantom(spec).first.values() != a.values());

    const auto truth = generate_phantom(spec).second;
    double sum = 0, sq = 0, n = 0;
    for (std::size_t i = 0; i < a.values().size(); ++i) {
        if (truth.values()[i]) continue;
        sum += a.values()[i];
        sq += a.values()[i] * a.values()[i];
        ++n;
    }
    const double mean = sum / n;
    CHECK(mean == doctest::Approx(50.0).epsilon(0.01));
    CHECK(std::sqrt(sq / n - mean * mean) == doctest::Approx(15.0).epsilon(0.02));
    for (float v : a.values()) CHECK(v == std::round(v));
}

TEST_CASE("invalid phantoms") {
    PhantomSpec spec;
    spec.r0 = 2;
    spec.profile = RadiusProfile::Constant;
    CHECK_THROWS_AS(generate_phantom(spec), ArgumentError);
    spec = {};
    spec.drift_x = 50;
    try {
        generate_phantom(spec);
        FAIL("expected invalid-phantom");
    } catch (const ArgumentError& e) {
        CHECK(e.reason() == "invalid-phantom");
    }
    spec = {};
    spec.noise_sigma = -1;
    CHECK_THROWS_AS(generate_phantom(spec), ArgumentError);
}

TEST_CASE("phantom spec json") {
    PhantomSpec spec;
    spec.noise_sigma = 15;
    spec.profile = RadiusProfile::Sinusoidal;
    spec.radius_amplitude = 2;
    spec.pixel_type = PixelType::Float32;
    const PhantomSpec back = phantom_from_json(phantom_to_json(spec));
    CHECK(phantom_to_json(back) == phantom_to_json(spec));

    const PhantomSpec small = phantom_from_json(nlohmann::json::parse(R"({"sizes": [64, 64, 10],
        "radius": {"profile": "constant", "r0": 8}, "drift": {"amplitude_x": 3}})"));
    CHECK(small.center == Point2{32, 32});
    CHECK(small.drift_period == 10.0);
    CHECK(small.radius(9) == 8.0);

    CHECK_THROWS_AS(phantom_from_json(nlohmann::json::parse(R"({"radius": {"profile": "spiral"}})")), ParseError);
    CHECK_THROWS_AS(phantom_from_json(nlohmann::json::parse(R"({"sizes": "big"})")), ParseError);
}

TEST_CASE("rasterize: square covering pixel centres 1..3") {
    const std::vector<Point2> sq{{0.5, 0.5}, {3.5, 0.5}, {3.5, 3.5}, {0.5, 3.5}};
    const auto px = rasterize_polygon(sq, 6, 6);
    CHECK(std::count(px.begin(), px.end(), 1) == 9);
    for (std::size_t y = 1; y <= 3; ++y)
        for (std::size_t x = 1; x <= 3; ++x) CHECK(px[x + 6 * y] == 1);
}

TEST_CASE("rasterize matches the per-pixel even-odd test") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-3, 23);
    std::uniform_int_distribution<int> ui(-2, 22);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<Point2> poly;
        const int nv = 3 + trial % 6;
        for (int i = 0; i < nv; ++i) {
            // half the cases put vertices on the pixel grid to exercise edges through centres
            if (trial % 2) {
                poly.push_back({double(ui(rng)), double(ui(rng))});
            } else {
                poly.push_back({u(rng), u(rng)});
            }
        }
        const auto px = rasterize_polygon(poly, 20, 20);
        for (std::size_t y = 0; y < 20; ++y)
            for (std::size_t x = 0; x < 20; ++x)
                CHECK((px[x + 20 * y] == 1) == oracle::centre_inside(double(x), double(y), poly));
    }
}

TEST_CASE("voxelize places contours on their slices") {
    ContourSet cs;
    cs.put({1, Provenance::UserDrawn, {{0.5, 0.5}, {3.5, 0.5}, {3.5, 3.5}, {0.5, 3.5}}});
    const VolumeGeometry g{{6, 6, 3}, {1, 1, 2}};
    const MaskVolume m = voxelize(cs, g);
    CHECK(m.geometry() == g);
    CHECK(volume_stats(m).voxels == 9);
    CHECK(volume_stats(m).cm3 == doctest::Approx(9 * 2 / 1000.0));
    CHECK(m.at(2, 2, 1) == 1);
    CHECK(m.at(2, 2, 0) == 0);
    cs.put({3, Provenance::UserDrawn, {{0.5, 0.5}, {3.5, 0.5}, {3.5, 3.5}}});
    CHECK_THROWS_AS(voxelize(cs, g), IndexError);
}
