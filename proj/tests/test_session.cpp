#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "scenario.hpp"
#include "tgcut/error.hpp"
#include "tgcut/metrics.hpp"
#include "tgcut/nrrd.hpp"
#include "tgcut/phantom.hpp"
#include "tgcut/raster.hpp"
#include "tgcut/session.hpp"

using namespace tgcut;

namespace {

std::shared_ptr<const Volume3D> share(Volume3D v) { return std::make_shared<const Volume3D>(std::move(v)); }

PhantomSpec straight_tube(std::size_t nz, double radius) {
    PhantomSpec s;
    s.sizes = {96, 96, nz};
    s.center = {48, 48};
    s.drift_period = static_cast<double>(nz);
    s.drift_x = 5;
    s.profile = RadiusProfile::Constant;
    s.r0 = radius;
    return s;
}

Template circle(Point2 c, double r, int z = 0) { return Template{oracle::circle_polygon(c, r, 24), z}; }

MaskVolume slice_mask(const VolumeGeometry& g, const std::vector<std::uint8_t>& pixels) {
    VolumeGeometry one = g;
    one.sizes[2] = 1;
    return MaskVolume(one, pixels);
}

std::vector<std::uint8_t> truth_slice(const MaskVolume& truth, int z) {
    const auto& g = truth.geometry();
    const auto first = truth.values().begin() + static_cast<long>(g.slice_voxels() * static_cast<std::size_t>(z));
    return {first, first + static_cast<long>(g.slice_voxels())};
}

double slice_dsc(const MaskVolume& truth, const Contour& c) {
    const auto& g = truth.geometry();
    const auto filled = rasterize_polygon(c.vertices, g.sizes[0], g.sizes[1]);
    return dsc(slice_mask(g, filled), slice_mask(g, truth_slice(truth, c.z)));
}

} // namespace

TEST_CASE("start stores the first cut as user-drawn") {
    const auto [vol, truth] = generate_phantom(straight_tube(8, 10));
    const auto v = share(vol);
    const Point2 c{48 + 5 * std::sin(2 * std::numbers::pi * 3 / 8.0), 48};
    Session s = Session::start(v, 3, circle(c, 16), SeedPoint{c, 3}, GraphParams{});
    CHECK(s.status() == SessionStatus::Reviewing);
    CHECK(s.current_slice() == 3);
    REQUIRE(s.contours().slices.size() == 1);
    const Contour& first = s.contours().slices.at(3);
    CHECK(first.provenance == Provenance::UserDrawn);
    CHECK(first.vertices == s.current().cut.contour);
    CHECK(first.vertices.size() == 40);
    CHECK(s.current_template().markers == circle(c, 16).markers);  // user templates are not scaled
    CHECK(slice_dsc(truth, first) >= 90.0);
    CHECK(s.event_log()["events"].size() == 1);
    CHECK(s.event_log()["events"][0]["type"] == "start");
}

TEST_CASE("start errors") {
    const auto v = share(generate_phantom(straight_tube(8, 10)).first);
    const Point2 c{48, 48};
    CHECK_THROWS_AS(Session::start(v, 8, circle(c, 16), SeedPoint{c, 8}, {}), IndexError);
    CHECK_THROWS_AS(Session::start(v, -1, circle(c, 16), SeedPoint{c, 0}, {}), IndexError);
    try {
        Session::start(v, 0, circle(c, 16), SeedPoint{{80, 80}, 0}, {});
        FAIL("expected a geometry error");
    } catch (const GeometryError& e) {
        CHECK(e.reason() == "seed-outside-template");
    }
    try {
        Session::start(v, 0, Template{{{40, 40}, {50, 40}}, 0}, SeedPoint{c, 0}, {});
        FAIL("expected an argument error");
    } catch (const ArgumentError& e) {
        CHECK(e.reason() == "too-few-markers");
    }
    GraphParams bad;
    bad.delta = 5;
    CHECK_THROWS_AS(Session::start(v, 0, circle(c, 16), SeedPoint{c, 0}, bad), ArgumentError);
}

TEST_CASE("advance derives template and seed from the last cut") {
    const auto v = share(generate_phantom(straight_tube(10, 10)).first);
    const Point2 c = straight_tube(10, 10).centerline(2);
    Session s = Session::start(v, 2, circle(c, 15), SeedPoint{c, 2}, GraphParams{});
    const auto base = s.contours().slices.at(2).vertices;
    const Point2 bc = centroid(base);
    s.accept_and_advance(1, 2);
    CHECK(s.current_slice() == 4);
    CHECK(s.current_seed().position == bc);
    const Template expected = scale_template(Template{base, 4}, 1.6, bc);
    CHECK(s.current_template().markers == expected.markers);
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(distance(s.current_template().markers[i], bc) == doctest::Approx(1.6 * distance(base[i], bc)));
    }
    CHECK(s.contours().slices.at(4).provenance == Provenance::Computed);
    CHECK(s.contours().slices.count(3) == 0);

    CHECK_THROWS_AS(s.accept_and_advance(0, 1), ArgumentError);
    CHECK_THROWS_AS(s.accept_and_advance(1, 0), ArgumentError);
    CHECK_THROWS_AS(s.accept_and_advance(1, 6), IndexError);
    CHECK(s.current_slice() == 4);
    CHECK(s.event_log()["events"].size() == 2);
}

TEST_CASE("bidirectional propagation covers both sides without duplicates") {
    const PhantomSpec spec = straight_tube(14, 10);
    const auto v = share(generate_phantom(spec).first);
    const Point2 c = spec.centerline(6);
    Session s = Session::start(v, 6, circle(c, 15), SeedPoint{c, 6}, GraphParams{});
    s.accept_and_advance(1, 1);
    s.accept_and_advance(1, 1);
    const auto z6 = s.contours().slices.at(6).vertices;
    s.accept_and_advance(-1, 1);
    CHECK(s.current_slice() == 5);
    CHECK(s.current_template().markers == scale_template(Template{z6, 5}, 1.6, centroid(z6)).markers);
    s.accept_and_advance(-1, 2);
    CHECK(s.current_slice() == 3);
    s.accept_and_advance(1, 1);  // continues from the top end
    CHECK(s.current_slice() == 9);
    std::vector<int> zs;
    for (const auto& [z, contour] : s.contours().slices) zs.push_back(z);
    CHECK(zs == std::vector<int>{3, 5, 6, 7, 8, 9});
}

TEST_CASE("a collapsed cut blocks advancing") {
    // one bright pixel under the seed: every ray cuts right after its first node
    Volume3D vol({{32, 32, 3}, {1, 1, 1}}, PixelType::Float32, std::vector<float>(32 * 32 * 3, 0.0f));
    std::vector<float> values = vol.values();
    values[10 + 32 * 10 + 32 * 32] = 200.0f;
    const auto v = share(Volume3D(vol.geometry(), PixelType::Float32, values));
    GraphParams p;
    p.k = 8;
    p.n = 3;
    Session s = Session::start(v, 1, Template{oracle::circle_polygon({10, 10}, 2.2, 64), 1}, SeedPoint{{10, 10}, 1}, p);
    REQUIRE(std::abs(signed_area(s.contours().slices.at(1).vertices)) < 2.0);
    try {
        s.accept_and_advance(1, 1);
        FAIL("expected degenerate-cut");
    } catch (const GeometryError& e) {
        CHECK(e.reason() == "degenerate-cut");
    }
    // a redraw with a sensible template recovers the session
    s.redraw(Template{oracle::circle_polygon({10, 10}, 6, 24), 1}, SeedPoint{{10, 10}, 1});
    CHECK(s.current().cut.boundary.size() == 8);
}

TEST_CASE("redraw recomputes the current slice") {
    const PhantomSpec spec = straight_tube(8, 10);
    const auto [vol, truth] = generate_phantom(spec);
    const auto v = share(vol);
    const Point2 c = spec.centerline(2);
    Session s = Session::start(v, 1, circle(spec.centerline(1), 15), SeedPoint{spec.centerline(1), 1}, GraphParams{});
    s.accept_and_advance(1, 1);
    CHECK(s.contours().slices.at(2).provenance == Provenance::Computed);

    const CutResult a = s.redraw(circle(c, 20), SeedPoint{c, 2}).cut;
    const CutResult b = s.redraw(circle(c, 20), SeedPoint{c, 2}).cut;
    CHECK(a.boundary == b.boundary);
    CHECK(a.contour == b.contour);
    CHECK(s.contours().slices.at(2).provenance == Provenance::UserDrawn);
    CHECK(s.contours().slices.at(2).vertices == b.contour);
    // a larger template still locks onto the tube wall
    const CutResult wide = s.redraw(circle(c, 26), SeedPoint{c, 2}).cut;
    CHECK(slice_dsc(truth, s.contours().slices.at(2)) >= 90.0);
    CHECK(wide.contour.size() == 40);

    const auto log_size = s.event_log()["events"].size();
    const auto before = s.contours().slices.at(2).vertices;
    CHECK_THROWS_AS(s.redraw(circle(c, 20), SeedPoint{{c.x + 40, c.y}, 2}), GeometryError);
    CHECK(s.contours().slices.at(2).vertices == before);
    CHECK(s.event_log()["events"].size() == log_size);
}

TEST_CASE("parameters can change between steps and are logged") {
    const PhantomSpec spec = straight_tube(8, 10);
    const auto v = share(generate_phantom(spec).first);
    Session s = Session::start(v, 1, circle(spec.centerline(1), 15), SeedPoint{spec.centerline(1), 1}, GraphParams{});
    GraphParams p;
    p.k = 24;
    p.sf = 1.4;
    s.accept_and_advance(1, 1, p);
    CHECK(s.params() == p);
    CHECK(s.current().cut.boundary.size() == 24);
    CHECK(s.event_log()["events"][1]["params"]["k"] == 24);

    GraphParams bad = p;
    bad.delta = 3;
    CHECK_THROWS_AS(s.accept_and_advance(1, 1, bad), ArgumentError);
    CHECK(s.params() == p);
    CHECK(s.current_slice() == 2);

    // unchanged params are not repeated in the log
    s.accept_and_advance(1, 1, p);
    CHECK_FALSE(s.event_log()["events"][2].contains("params"));
}

TEST_CASE("interpolation blends radii about blended centroids") {
    ContourSet cs;
    const auto ring = oracle::circle_polygon({30, 30}, 10, 40);
    cs.put({0, Provenance::Computed, ring});
    cs.put({2, Provenance::Computed, ring});
    CHECK(interpolate_gaps(cs, 0, 2, 40) == std::vector<int>{1});
    const Contour& mid = cs.slices.at(1);
    CHECK(mid.provenance == Provenance::Interpolated);
    REQUIRE(mid.vertices.size() == ring.size());
    for (std::size_t i = 0; i < ring.size(); ++i) CHECK(distance(mid.vertices[i], ring[i]) < 1e-9);

    ContourSet grow;
    grow.put({0, Provenance::Computed, oracle::circle_polygon({30, 30}, 10, 40)});
    grow.put({2, Provenance::Computed, oracle::circle_polygon({30, 30}, 20, 40)});
    interpolate_gaps(grow, 0, 2, 40);
    for (const auto& p : grow.slices.at(1).vertices) CHECK(std::abs(distance(p, {30, 30}) - 15.0) < 1e-6);

    ContourSet shift;
    shift.put({0, Provenance::Computed, oracle::circle_polygon({20, 30}, 10, 40)});
    shift.put({4, Provenance::UserDrawn, oracle::circle_polygon({40, 30}, 10, 40)});
    CHECK(interpolate_gaps(shift, 0, 4, 40) == std::vector<int>{1, 2, 3});
    const Point2 mc = centroid(shift.slices.at(1).vertices);
    CHECK(mc.x == doctest::Approx(25.0));
    CHECK(mc.y == doctest::Approx(30.0));

    try {
        interpolate_gaps(shift, -2, 5, 40);
        FAIL("expected an interpolation error");
    } catch (const InterpolationError& e) {
        CHECK(e.reason() == "interpolation-gap");
        CHECK(std::string(e.what()).find("-2, -1, 5") != std::string::npos);
    }
}

TEST_CASE("tube traversal: every computed contour matches its slice") {
    const PhantomSpec spec = straight_tube(21, 11);
    const auto [vol, truth] = generate_phantom(spec);
    const auto v = share(vol);
    Session s = Session::start(v, 0, circle(spec.centerline(0), 16), SeedPoint{spec.centerline(0), 0}, GraphParams{});
    for (int step = 0; step < 20; ++step) s.accept_and_advance(1, 1);
    int computed = 0;
    for (const auto& [z, c] : s.contours().slices) {
        if (c.provenance != Provenance::Computed) continue;
        ++computed;
        CHECK_MESSAGE(slice_dsc(truth, c) >= 90.0, "slice " << z);
    }
    CHECK(computed == 20);
}

TEST_CASE("cone phantom with skipped slices: interpolated slices match too") {
    PhantomSpec spec;  // default cone
    const auto [vol, truth] = generate_phantom(spec);
    Session s = replay(share(vol), scenario::phantom_script(spec, 1, 2));
    CHECK(s.status() == SessionStatus::Finalized);
    int interpolated = 0;
    for (const auto& [z, c] : s.contours().slices) {
        if (c.provenance != Provenance::Interpolated) continue;
        ++interpolated;
        CHECK_MESSAGE(slice_dsc(truth, c) >= 90.0, "slice " << z);
    }
    CHECK(interpolated == 11);
    CHECK(s.contours().slices.size() == spec.sizes[2]);
    CHECK(dsc(s.voxelize(), truth) >= 90.0);
}

TEST_CASE("finalize, voxelize and export") {
    const PhantomSpec spec = straight_tube(9, 10);
    const auto v = share(generate_phantom(spec).first);
    Session s = Session::start(v, 4, circle(spec.centerline(4), 15), SeedPoint{spec.centerline(4), 4}, GraphParams{});
    CHECK_THROWS_AS(s.voxelize(), StateError);
    CHECK_THROWS_AS(s.export_files(), StateError);
    s.accept_and_advance(1, 3);
    s.accept_and_advance(-1, 2);
    const FinalizeReport r = s.finalize();
    CHECK(r.interpolated == std::vector<int>{3, 5, 6});
    CHECK(r.z_min == 2);
    CHECK(r.z_max == 7);
    CHECK(r.elapsed_seconds >= 0.0);
    CHECK(s.status() == SessionStatus::Finalized);
    for (int z = 2; z <= 7; ++z) CHECK(s.contours().slices.count(z) == 1);

    try {
        s.accept_and_advance(1, 1);
        FAIL("expected a state error");
    } catch (const StateError& e) {
        CHECK(e.reason() == "session-finalized");
    }
    CHECK_THROWS_AS(s.redraw(circle(spec.centerline(7), 15), SeedPoint{spec.centerline(7), 7}), StateError);
    CHECK_THROWS_AS(s.finalize(), StateError);

    const MaskVolume mask = s.voxelize();
    CHECK(mask.geometry() == v->geometry());
    const ExportBundle out = s.export_files();
    const ContourSet back = read_contour_set(out.contours_json);
    CHECK(back.object == s.contours().object);
    REQUIRE(back.slices.size() == s.contours().slices.size());
    for (const auto& [z, c] : s.contours().slices) {
        CHECK(back.slices.at(z).provenance == c.provenance);
        CHECK(back.slices.at(z).vertices == c.vertices);
    }
    const MaskVolume reread = to_mask(read_nrrd(out.mask_nrrd));
    CHECK(reread == mask);
    CHECK(volume_stats(mask).voxels == static_cast<std::size_t>(std::count(mask.values().begin(),
                                                                               mask.values().end(), 1)));
}

TEST_CASE("replaying the event log reproduces the session") {
    const PhantomSpec spec = straight_tube(9, 10);
    const auto v = share(generate_phantom(spec).first);
    Session s = Session::start(v, 4, circle(spec.centerline(4), 15), SeedPoint{spec.centerline(4), 4}, GraphParams{});
    s.accept_and_advance(1, 2);
    GraphParams p;
    p.t_weight = 0.1;
    s.redraw(circle(spec.centerline(6), 17), SeedPoint{spec.centerline(6), 6}, p);
    s.accept_and_advance(-1, 1);
    s.interpolate_missing();
    s.finalize();

    const auto log = nlohmann::json::parse(s.event_log().dump());
    for (const auto& ev : log["events"]) CHECK(ev.contains("t"));
    const Session again = replay(v, log);
    CHECK(again.params() == p);
    const ExportBundle a = s.export_files();
    const ExportBundle b = again.export_files();
    CHECK(a.contours_json == b.contours_json);
    CHECK(a.mask_nrrd == b.mask_nrrd);

    nlohmann::json broken = log;
    broken["events"][1]["type"] = "jump";
    CHECK_THROWS_AS(replay(v, broken), ParseError);
    broken = log;
    broken["events"].erase(0);
    CHECK_THROWS_AS(replay(v, broken), ParseError);
    broken = log;
    broken["events"][1].erase("skip");
    CHECK_THROWS_AS(replay(v, broken), ParseError);
}

TEST_CASE("boundary indices are invariant under scaling the scene") {
    // The fine volume is the coarse one bilinearly upsampled by q = 2, so both
    // describe the same continuous image with coordinates scaled by q.
    PhantomSpec spec;
    spec.sizes = {64, 64, 5};
    spec.center = {32, 32};
    spec.drift_x = 3;
    spec.drift_period = 5;
    spec.r0 = 8;
    spec.r1 = 11;
    spec.noise_sigma = 15;
    spec.seed = 11;
    const Volume3D coarse = generate_phantom(spec).first;

    const double q = 2.0;
    const std::size_t fn = 2 * 64 - 1;
    std::vector<float> fine_values(fn * fn * 5);
    for (std::size_t z = 0; z < 5; ++z) {
        const Slice2D cs = extract_slice(coarse, z);
        for (std::size_t y = 0; y < fn; ++y)
            for (std::size_t x = 0; x < fn; ++x)
                fine_values[x + fn * (y + fn * z)] = sample_grey(cs, {x / q, y / q});
    }
    const auto fine = share(Volume3D({{fn, fn, 5}, {0.5, 0.5, 3.0}}, PixelType::Float32, std::move(fine_values)));

    auto run = [&](std::shared_ptr<const Volume3D> vol, double scale) {
        const Point2 c = scale * spec.centerline(0);
        std::vector<std::vector<int>> bs;
        Session s = Session::start(vol, 0, Template{oracle::circle_polygon(c, scale * 12.0, 24), 0}, SeedPoint{c, 0},
                                   GraphParams{});
        bs.push_back(s.current().cut.boundary);
        for (int i = 0; i < 4; ++i) bs.push_back(s.accept_and_advance(1, 1).cut.boundary);
        return bs;
    };
    const auto a = run(share(coarse), 1.0);
    const auto b = run(fine, q);
    for (std::size_t z = 0; z < a.size(); ++z) CHECK_MESSAGE(a[z] == b[z], "slice " << z);
}
