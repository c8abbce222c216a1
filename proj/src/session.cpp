#include "tgcut/session.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tgcut/error.hpp"
#include "tgcut/nrrd.hpp"
#include "tgcut/raster.hpp"

namespace tgcut {

using nlohmann::json;

std::string_view to_string(SessionStatus s) {
    return s == SessionStatus::Reviewing ? "reviewing" : "finalized";
}

std::vector<double> radial_profile(const std::vector<Point2>& contour, Point2 center, std::size_t k) {
    const Template t{contour, 0};
    std::vector<double> radii;
    radii.reserve(k);
    for (double angle : ray_angles(k)) {
        try {
            radii.push_back(distance(intersect_ray_polygon(center, angle, t), center));
        } catch (const GeometryError&) {
            radii.push_back(0.0);
        }
    }
    return radii;
}

std::vector<Point2> blend_contours(const std::vector<Point2>& a, const std::vector<Point2>& b, double w,
                                   std::size_t k) {
    const Point2 ca = centroid(a);
    const Point2 cb = centroid(b);
    const auto ra = radial_profile(a, ca, k);
    const auto rb = radial_profile(b, cb, k);
    const Point2 c = (1.0 - w) * ca + w * cb;
    const auto angles = ray_angles(k);
    std::vector<Point2> out;
    out.reserve(k);
    for (std::size_t m = 0; m < k; ++m) {
        const double r = (1.0 - w) * ra[m] + w * rb[m];
        out.push_back(c + r * Point2{std::cos(angles[m]), std::sin(angles[m])});
    }
    return out;
}

std::vector<int> interpolate_gaps(ContourSet& contours, int z_lo, int z_hi, std::size_t k) {
    std::vector<int> anchors;
    for (const auto& [z, c] : contours.slices) {
        if (c.provenance != Provenance::Interpolated) anchors.push_back(z);
    }

    struct Job {
        int z;
        int below;
        int above;
    };
    std::vector<Job> jobs;
    std::vector<int> orphans;
    for (int z = z_lo; z <= z_hi; ++z) {
        if (std::binary_search(anchors.begin(), anchors.end(), z)) continue;
        const auto up = std::upper_bound(anchors.begin(), anchors.end(), z);
        if (up == anchors.begin() || up == anchors.end()) {
            orphans.push_back(z);
            continue;
        }
        jobs.push_back({z, *(up - 1), *up});
    }
    if (!orphans.empty()) {
        std::string list;
        for (int z : orphans) list += (list.empty() ? "" : ", ") + std::to_string(z);
        throw InterpolationError("no bracketing contours for slices: " + list);
    }

    std::vector<int> filled;
    for (const auto& job : jobs) {
        const double w = static_cast<double>(job.z - job.below) / static_cast<double>(job.above - job.below);
        contours.put({job.z, Provenance::Interpolated,
                      blend_contours(contours.slices.at(job.below).vertices,
                                     contours.slices.at(job.above).vertices, w, k)});
        filled.push_back(job.z);
    }
    return filled;
}

json params_to_json(const GraphParams& p) {
    return {{"k", p.k}, {"n", p.n}, {"delta", p.delta}, {"t_weight", p.t_weight}, {"sf", p.sf}};
}

GraphParams params_from_json(const json& j, GraphParams p) {
    if (j.is_null()) return p;
    if (!j.is_object()) throw ParseError("params must be an object", "schema-violation");
    auto count = [&](const char* key, std::size_t& out) {
        if (const auto it = j.find(key); it != j.end()) {
            if (!it->is_number_integer() || it->get<long long>() < 0) {
                throw ParseError(std::string("params/") + key + " must be a non-negative integer", "schema-violation");
            }
            out = it->get<std::size_t>();
        }
    };
    count("k", p.k);
    count("n", p.n);
    if (const auto it = j.find("delta"); it != j.end()) {
        if (!it->is_number_integer()) throw ParseError("params/delta must be an integer", "schema-violation");
        p.delta = it->get<int>();
    }
    for (auto [key, field] : {std::pair{"t_weight", &p.t_weight}, std::pair{"sf", &p.sf}}) {
        if (const auto it = j.find(key); it != j.end()) {
            if (!it->is_number()) throw ParseError(std::string("params/") + key + " must be a number", "schema-violation");
            *field = it->get<double>();
        }
    }
    p.validate();
    return p;
}

json points_to_json(const std::vector<Point2>& pts) {
    json arr = json::array();
    for (const auto& p : pts) arr.push_back({p.x, p.y});
    return arr;
}

namespace {

Point2 point_from_json(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ParseError(path + " must be [x, y]", "schema-violation");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

} // namespace

std::vector<Point2> points_from_json(const json& j, const std::string& path) {
    if (!j.is_array()) throw ParseError(path + " must be an array of [x, y]", "schema-violation");
    std::vector<Point2> pts;
    for (std::size_t i = 0; i < j.size(); ++i) pts.push_back(point_from_json(j[i], path + "/" + std::to_string(i)));
    return pts;
}

Session Session::start(std::shared_ptr<const Volume3D> volume, int z0, Template tmpl, SeedPoint seed,
                       GraphParams params, std::string object) {
    if (!volume) throw ArgumentError("session needs a volume");
    if (z0 < 0 || static_cast<std::size_t>(z0) >= volume->nz()) {
        throw IndexError("start slice " + std::to_string(z0) + " outside volume with " +
                         std::to_string(volume->nz()) + " slices");
    }
    params.validate();

    Session s;
    s.volume_ = std::move(volume);
    s.params_ = params;
    s.contours_.object = object;
    s.started_ = std::chrono::steady_clock::now();
    s.log_ = {{"format", "tgcut-replay"}, {"version", 1}, {"object", object}, {"events", json::array()}};

    const json template_json = points_to_json(tmpl.markers);
    const json seed_json = {seed.position.x, seed.position.y};
    s.compute(z0, std::move(tmpl), seed, Provenance::UserDrawn);
    s.log_event({{"type", "start"},
                 {"z0", z0},
                 {"template", template_json},
                 {"seed", seed_json},
                 {"params", params_to_json(params)}});
    return s;
}

void Session::compute(int z, Template tmpl, SeedPoint seed, Provenance provenance) {
    tmpl.z = z;
    seed.z = z;
    const Slice2D slice = extract_slice(*volume_, static_cast<std::size_t>(z));
    SliceTrace trace = trace_one_slice(slice, tmpl, seed, params_);
    contours_.put({z, provenance, trace.cut.contour});
    trace_ = std::move(trace);
    template_ = std::move(tmpl);
    seed_ = seed;
    current_z_ = z;
}

void Session::require_reviewing(const char* op) const {
    if (status_ != SessionStatus::Reviewing) {
        throw StateError("session-finalized", std::string(op) + " is not allowed on a finalized session");
    }
}

void Session::log_event(json event) {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - started_;
    event["t"] = dt.count();
    log_["events"].push_back(std::move(event));
}

double Session::elapsed_seconds() const {
    const auto& events = log_["events"];
    return events.empty() ? 0.0 : events.back().value("t", 0.0);
}

GraphParams Session::apply_params(const std::optional<GraphParams>& params, json& event) {
    const GraphParams previous = params_;
    if (params && *params != params_) {
        params->validate();
        params_ = *params;
        event["params"] = params_to_json(params_);
    }
    return previous;
}

const SliceTrace& Session::accept_and_advance(int direction, int skip, std::optional<GraphParams> params) {
    require_reviewing("advance");
    if (direction != 1 && direction != -1) throw ArgumentError("direction must be +1 or -1", "invalid-direction");
    if (skip < 1) throw ArgumentError("skip must be >= 1", "invalid-skip");

    int base_z = current_z_;
    bool have_base = false;
    for (const auto& [z, c] : contours_.slices) {
        if (c.provenance == Provenance::Interpolated) continue;
        if (!have_base || (direction > 0 ? z > base_z : z < base_z)) base_z = z;
        have_base = true;
    }
    const auto& base = contours_.slices.at(base_z).vertices;
    if (std::abs(signed_area(base)) < 2.0) {
        throw GeometryError("degenerate-cut", "cut on slice " + std::to_string(base_z) +
                                                  " encloses less than 2 pixels; redraw the template");
    }
    const long target = static_cast<long>(base_z) + static_cast<long>(direction) * skip;
    if (target < 0 || target >= static_cast<long>(volume_->nz())) {
        throw IndexError("advance target slice " + std::to_string(target) + " lies outside the volume");
    }
    const int tz = static_cast<int>(target);
    if (const auto it = contours_.slices.find(tz);
        it != contours_.slices.end() && it->second.provenance != Provenance::Interpolated) {
        throw StateError("slice-already-segmented", "slice " + std::to_string(tz) + " already has a contour");
    }

    json event = {{"type", "accept_and_advance"}, {"direction", direction}, {"skip", skip}};
    const GraphParams previous = apply_params(params, event);
    try {
        const Point2 center = centroid(base);
        Template next = scale_template(Template{base, tz}, params_.sf, center);
        compute(tz, std::move(next), SeedPoint{center, tz}, Provenance::Computed);
    } catch (...) {
        params_ = previous;
        throw;
    }
    log_event(std::move(event));
    return trace_;
}

const SliceTrace& Session::redraw(Template tmpl, SeedPoint seed, std::optional<GraphParams> params) {
    require_reviewing("redraw");
    json event = {{"type", "redraw"},
                  {"template", points_to_json(tmpl.markers)},
                  {"seed", {seed.position.x, seed.position.y}}};
    const GraphParams previous = apply_params(params, event);
    try {
        compute(current_z_, std::move(tmpl), seed, Provenance::UserDrawn);
    } catch (...) {
        params_ = previous;
        throw;
    }
    log_event(std::move(event));
    return trace_;
}

namespace {

std::pair<int, int> anchor_range(const ContourSet& cs) {
    int lo = 0;
    int hi = 0;
    bool any = false;
    for (const auto& [z, c] : cs.slices) {
        if (c.provenance == Provenance::Interpolated) continue;
        lo = any ? std::min(lo, z) : z;
        hi = any ? std::max(hi, z) : z;
        any = true;
    }
    return {lo, hi};
}

} // namespace

std::vector<int> Session::interpolate_missing() {
    require_reviewing("interpolate");
    const auto [lo, hi] = anchor_range(contours_);
    auto filled = interpolate_gaps(contours_, lo, hi, params_.k);
    log_event({{"type", "interpolate"}});
    return filled;
}

FinalizeReport Session::finalize() {
    require_reviewing("finalize");
    const auto [lo, hi] = anchor_range(contours_);
    FinalizeReport report;
    report.interpolated = interpolate_gaps(contours_, lo, hi, params_.k);
    report.z_min = lo;
    report.z_max = hi;
    status_ = SessionStatus::Finalized;
    log_event({{"type", "finalize"}});
    report.elapsed_seconds = elapsed_seconds();
    return report;
}

MaskVolume Session::voxelize() const {
    if (status_ != SessionStatus::Finalized) throw StateError("not-finalized", "voxelize requires a finalized session");
    return tgcut::voxelize(contours_, volume_->geometry());
}

ExportBundle Session::export_files() const {
    if (status_ != SessionStatus::Finalized) throw StateError("not-finalized", "export requires a finalized session");
    return {write_contour_set(contours_), write_nrrd(voxelize())};
}

Session replay(std::shared_ptr<const Volume3D> volume, const json& log, const GraphParams* overrides) {
    if (!log.is_object() || !log.contains("events") || !log["events"].is_array()) {
        throw ParseError("replay document needs an \"events\" array", "schema-violation");
    }
    const json& events = log["events"];
    if (events.empty() || !events[0].is_object() || events[0].value("type", "") != "start") {
        throw ParseError("replay must begin with a start event", "schema-violation");
    }

    auto field = [](const json& ev, const char* key, std::size_t idx) -> const json& {
        const auto it = ev.find(key);
        if (it == ev.end()) {
            throw ParseError("/events/" + std::to_string(idx) + " lacks \"" + key + "\"", "schema-violation");
        }
        return *it;
    };
    auto int_field = [&](const json& ev, const char* key, std::size_t idx) {
        const json& v = field(ev, key, idx);
        if (!v.is_number_integer()) {
            throw ParseError("/events/" + std::to_string(idx) + "/" + key + " must be an integer", "schema-violation");
        }
        return v.get<int>();
    };

    const json& first = events[0];
    const GraphParams params =
        overrides ? *overrides : params_from_json(first.contains("params") ? first["params"] : json());
    const std::string object = log.value("object", std::string("object"));
    Session s = Session::start(std::move(volume), int_field(first, "z0", 0),
                               Template{points_from_json(field(first, "template", 0), "/events/0/template"), 0},
                               SeedPoint{point_from_json(field(first, "seed", 0), "/events/0/seed"), 0}, params,
                               object);

    for (std::size_t i = 1; i < events.size(); ++i) {
        const json& ev = events[i];
        if (!ev.is_object()) throw ParseError("/events/" + std::to_string(i) + " must be an object", "schema-violation");
        const std::string type = ev.value("type", "");
        std::optional<GraphParams> step_params;
        if (ev.contains("params")) step_params = params_from_json(ev["params"], s.params());
        if (type == "accept_and_advance") {
            s.accept_and_advance(int_field(ev, "direction", i), int_field(ev, "skip", i), step_params);
        } else if (type == "redraw") {
            const std::string path = "/events/" + std::to_string(i);
            s.redraw(Template{points_from_json(field(ev, "template", i), path + "/template"), 0},
                     SeedPoint{point_from_json(field(ev, "seed", i), path + "/seed"), 0}, step_params);
        } else if (type == "interpolate") {
            s.interpolate_missing();
        } else if (type == "finalize") {
            s.finalize();
        } else {
            throw ParseError("/events/" + std::to_string(i) + ": unknown event type \"" + type + "\"",
                             "schema-violation");
        }
    }
    return s;
}

} // namespace tgcut
