#include "tgcut/service.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>

#include <httplib.h>
#include <json.hpp>

#include "tgcut/error.hpp"
#include "tgcut/metrics.hpp"
#include "tgcut/nrrd.hpp"
#include "tgcut/session.hpp"

namespace tgcut {

using nlohmann::json;

namespace {

class NotFound : public Error {
public:
    NotFound(std::string reason, const std::string& what) : Error(std::move(reason), what) {}
};

struct SessionEntry {
    std::mutex mutex;
    std::string id;
    std::string volume_id;
    std::optional<Session> session;
};

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    try {
        json j = json::parse(req.body);
        if (!j.is_object()) throw ParseError("request body must be a JSON object", "invalid-body");
        return j;
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("request body is not valid JSON: ") + e.what(), "invalid-body");
    }
}

const json& body_field(const json& body, const char* key) {
    const auto it = body.find(key);
    if (it == body.end()) throw ParseError(std::string("missing field \"") + key + "\"", "missing-field");
    return *it;
}

int int_field(const json& body, const char* key) {
    const json& v = body_field(body, key);
    if (!v.is_number_integer()) throw ParseError(std::string("field \"") + key + "\" must be an integer", "invalid-field");
    return v.get<int>();
}

Point2 point_field(const json& body, const char* key) {
    const json& v = body_field(body, key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ParseError(std::string("field \"") + key + "\" must be [x, y]", "invalid-field");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

json handle_json(const SessionEntry& e) {
    const Session& s = *e.session;
    json slices = json::array();
    for (const auto& [z, c] : s.contours().slices) slices.push_back(z);
    return {{"id", e.id},
            {"volume", e.volume_id},
            {"status", std::string(to_string(s.status()))},
            {"current_slice", s.current_slice()},
            {"params", params_to_json(s.params())},
            {"slices", slices},
            {"elapsed_seconds", s.elapsed_seconds()}};
}

json cut_json(const Session& s, bool with_nodes) {
    const SliceTrace& t = s.current();
    json j = {{"z", s.current_slice()},
              {"boundary", t.cut.boundary},
              {"contour", points_to_json(t.cut.contour)},
              {"cut_cost", t.cut.cut_cost},
              {"flow_value", t.cut.flow_value},
              {"template", points_to_json(s.current_template().markers)},
              {"seed", {s.current_seed().position.x, s.current_seed().position.y}}};
    if (with_nodes) {
        j["nodes"] = points_to_json(t.grid.positions);
        j["rays"] = points_to_json(t.fan.hits);
    }
    return j;
}

std::optional<GraphParams> optional_params(const json& body, const GraphParams& current) {
    if (!body.contains("params")) return std::nullopt;
    return params_from_json(body["params"], current);
}

} // namespace

struct Service::Impl {
    std::filesystem::path data_dir;
    httplib::Server server;

    std::mutex volumes_mutex;
    std::map<std::string, std::shared_ptr<const Volume3D>> volumes;

    std::shared_mutex sessions_mutex;
    std::map<std::string, std::shared_ptr<SessionEntry>> sessions;
    std::atomic<unsigned long> next_id{1};

    explicit Impl(std::filesystem::path dir) : data_dir(std::move(dir)) { routes(); }

    std::vector<std::string> volume_ids() const {
        std::vector<std::string> ids;
        if (!std::filesystem::is_directory(data_dir)) return ids;
        for (const auto& entry : std::filesystem::directory_iterator(data_dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".nrrd") {
                ids.push_back(entry.path().stem().string());
            }
        }
        std::sort(ids.begin(), ids.end());
        return ids;
    }

    std::shared_ptr<const Volume3D> volume(const std::string& id) {
        std::lock_guard lock(volumes_mutex);
        if (const auto it = volumes.find(id); it != volumes.end()) return it->second;
        const auto ids = volume_ids();
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
            throw NotFound("unknown-volume", "no volume \"" + id + "\" in the data directory");
        }
        auto vol = std::make_shared<const Volume3D>(read_nrrd(read_file((data_dir / (id + ".nrrd")).string())));
        volumes.emplace(id, vol);
        return vol;
    }

    std::shared_ptr<SessionEntry> entry(const std::string& id) {
        std::shared_lock lock(sessions_mutex);
        const auto it = sessions.find(id);
        if (it == sessions.end()) throw NotFound("unknown-session", "no session \"" + id + "\"");
        return it->second;
    }

    template <typename Fn>
    static void guarded(httplib::Response& res, Fn&& fn) {
        auto fail = [&](int status, const std::string& reason, const std::string& detail) {
            res.status = status;
            res.set_content(json{{"code", status}, {"reason", reason}, {"detail", detail}}.dump(),
                            "application/json");
        };
        try {
            fn();
        } catch (const NotFound& e) {
            fail(404, e.reason(), e.what());
        } catch (const StateError& e) {
            fail(409, e.reason(), e.what());
        } catch (const InternalError& e) {
            fail(500, e.reason(), e.what());
        } catch (const Error& e) {
            fail(422, e.reason(), e.what());
        } catch (const std::exception& e) {
            fail(500, "internal-error", e.what());
        }
    }

    // Runs `fn` on a session under its writer lock; 409 if another request holds it.
    template <typename Fn>
    void with_session(const httplib::Request& req, httplib::Response& res, Fn&& fn) {
        guarded(res, [&] {
            auto e = entry(req.path_params.at("id"));
            std::unique_lock lock(e->mutex, std::try_to_lock);
            if (!lock.owns_lock()) throw StateError("session-busy", "another request is modifying this session");
            fn(*e);
        });
    }

    // Read-only access waits for a running mutation instead of failing.
    template <typename Fn>
    void read_session(const httplib::Request& req, httplib::Response& res, Fn&& fn) {
        guarded(res, [&] {
            auto e = entry(req.path_params.at("id"));
            std::lock_guard lock(e->mutex);
            fn(static_cast<const SessionEntry&>(*e));
        });
    }

    static void send_json(httplib::Response& res, const json& j, int status = 200) {
        res.status = status;
        res.set_content(j.dump(), "application/json");
    }

    void routes() {
        server.Get("/volumes", [this](const httplib::Request&, httplib::Response& res) {
            guarded(res, [&] {
                json list = json::array();
                for (const auto& id : volume_ids()) {
                    const auto vol = volume(id);
                    list.push_back({{"id", id},
                                    {"sizes", vol->geometry().sizes},
                                    {"spacing", vol->geometry().spacing},
                                    {"pixel_type", std::string(to_string(vol->pixel_type()))}});
                }
                send_json(res, {{"volumes", list}});
            });
        });

        server.Get("/volumes/:id/slices/:z", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] { slice_raster(req, res); });
        });

        server.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] { create_session(req, res); });
        });

        server.Get("/sessions/:id", [this](const httplib::Request& req, httplib::Response& res) {
            read_session(req, res, [&](const SessionEntry& e) {
                send_json(res, {{"session", handle_json(e)},
                                {"cut", cut_json(*e.session, req.has_param("nodes"))},
                                {"contours", json::parse(write_contour_set(e.session->contours()))}});
            });
        });

        server.Post("/sessions/:id/advance", [this](const httplib::Request& req, httplib::Response& res) {
            with_session(req, res, [&](SessionEntry& e) {
                const json body = parse_body(req);
                const int direction = body.contains("direction") ? int_field(body, "direction") : 1;
                const int skip = body.contains("skip") ? int_field(body, "skip") : 1;
                e.session->accept_and_advance(direction, skip, optional_params(body, e.session->params()));
                send_json(res, {{"session", handle_json(e)}, {"cut", cut_json(*e.session, req.has_param("nodes"))}});
            });
        });

        server.Post("/sessions/:id/redraw", [this](const httplib::Request& req, httplib::Response& res) {
            with_session(req, res, [&](SessionEntry& e) {
                const json body = parse_body(req);
                Template t{points_from_json(body_field(body, "template"), "/template"), 0};
                e.session->redraw(std::move(t), SeedPoint{point_field(body, "seed"), 0},
                                  optional_params(body, e.session->params()));
                send_json(res, {{"session", handle_json(e)}, {"cut", cut_json(*e.session, req.has_param("nodes"))}});
            });
        });

        server.Post("/sessions/:id/finalize", [this](const httplib::Request& req, httplib::Response& res) {
            with_session(req, res, [&](SessionEntry& e) {
                const json body = parse_body(req);
                std::optional<MaskVolume> reference;
                if (body.contains("reference") && !body["reference"].is_null()) {
                    if (!body["reference"].is_string()) throw ParseError("reference must be a volume id", "invalid-field");
                    reference = to_mask(*volume(body["reference"].get<std::string>()));
                    if (reference->geometry().sizes != e.session->volume().geometry().sizes) {
                        throw ArgumentError("reference mask geometry differs from the session volume",
                                            "geometry-mismatch");
                    }
                }
                const FinalizeReport report = e.session->finalize();
                json metrics = nullptr;
                if (reference) {
                    const MaskVolume mask = e.session->voxelize();
                    const OverlapReport r = compare_masks(mask, *reference, e.id);
                    metrics = report_to_json({r})["datasets"][0];
                }
                send_json(res, {{"session", handle_json(e)},
                                {"interpolated", report.interpolated},
                                {"z_range", {report.z_min, report.z_max}},
                                {"elapsed_seconds", report.elapsed_seconds},
                                {"metrics", metrics}});
            });
        });

        server.Get("/sessions/:id/export/mask", [this](const httplib::Request& req, httplib::Response& res) {
            read_session(req, res, [&](const SessionEntry& e) {
                res.set_content(write_nrrd(e.session->voxelize()), "application/octet-stream");
            });
        });

        server.Get("/sessions/:id/export/contours", [this](const httplib::Request& req, httplib::Response& res) {
            read_session(req, res, [&](const SessionEntry& e) {
                if (e.session->status() != SessionStatus::Finalized) {
                    throw StateError("not-finalized", "export requires a finalized session");
                }
                res.set_content(write_contour_set(e.session->contours()), "application/json");
            });
        });

        server.Get("/sessions/:id/events", [this](const httplib::Request& req, httplib::Response& res) {
            read_session(req, res, [&](const SessionEntry& e) {
                json log = e.session->event_log();
                log["volume"] = e.volume_id;
                send_json(res, log);
            });
        });
    }

    void slice_raster(const httplib::Request& req, httplib::Response& res) {
        const auto vol = volume(req.path_params.at("id"));
        long z = 0;
        try {
            std::size_t used = 0;
            const std::string zs = req.path_params.at("z");
            z = std::stol(zs, &used);
            if (used != zs.size()) throw std::invalid_argument(zs);
        } catch (const std::exception&) {
            throw ArgumentError("slice index must be an integer", "invalid-slice");
        }
        if (z < 0) throw IndexError("slice index must be non-negative");
        const Slice2D slice = extract_slice(*vol, static_cast<std::size_t>(z));

        double lo = 0.0;
        double hi = 0.0;
        if (req.has_param("window")) {
            const std::string w = req.get_param_value("window");
            const auto comma = w.find(',');
            try {
                if (comma == std::string::npos) throw std::invalid_argument(w);
                lo = std::stod(w.substr(0, comma));
                hi = std::stod(w.substr(comma + 1));
            } catch (const std::exception&) {
                throw ArgumentError("window must be \"lo,hi\"", "invalid-window");
            }
        } else {
            const auto [mn, mx] = std::minmax_element(vol->values().begin(), vol->values().end());
            lo = *mn;
            hi = *mx;
            if (hi <= lo) hi = lo + 1.0;
        }
        if (!(hi > lo)) throw ArgumentError("window width must be positive", "invalid-window");

        json pixels = json::array();
        for (float v : slice.values) {
            const double t = (static_cast<double>(v) - lo) / (hi - lo);
            pixels.push_back(static_cast<int>(std::clamp(std::lround(t * 255.0), 0L, 255L)));
        }
        send_json(res, {{"z", z},
                        {"width", slice.nx},
                        {"height", slice.ny},
                        {"spacing", {slice.spacing[0], slice.spacing[1]}},
                        {"window", {lo, hi}},
                        {"pixels", pixels}});
    }

    void create_session(const httplib::Request& req, httplib::Response& res) {
        const json body = parse_body(req);
        const json& vol_field = body_field(body, "volume");
        if (!vol_field.is_string()) throw ParseError("volume must be a string id", "invalid-field");
        const std::string volume_id = vol_field.get<std::string>();
        auto vol = volume(volume_id);
        const int z0 = int_field(body, "z0");
        Template t{points_from_json(body_field(body, "template"), "/template"), z0};
        const SeedPoint seed{point_field(body, "seed"), z0};
        const GraphParams params = params_from_json(body.contains("params") ? body["params"] : json());
        const std::string object = body.value("object", std::string("object"));

        auto e = std::make_shared<SessionEntry>();
        e->volume_id = volume_id;
        e->session.emplace(Session::start(std::move(vol), z0, std::move(t), seed, params, object));
        e->id = "s" + std::to_string(next_id.fetch_add(1));
        {
            std::unique_lock lock(sessions_mutex);
            sessions.emplace(e->id, e);
        }
        send_json(res, {{"session", handle_json(*e)}, {"cut", cut_json(*e->session, req.has_param("nodes"))}}, 201);
    }
};

Service::Service(std::filesystem::path data_dir) : impl_(std::make_unique<Impl>(std::move(data_dir))) {}

Service::~Service() { stop(); }

int Service::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool Service::listen() { return impl_->server.listen_after_bind(); }

void Service::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

} // namespace tgcut
