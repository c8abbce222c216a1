#pragma once

#include <filesystem>
#include <memory>
#include <string>

namespace tgcut {

/// HTTP/JSON front end for interactive sessions over the NRRD volumes found
/// in a data directory. Requests on distinct sessions run concurrently;
/// a mutating request that finds its session busy is answered with 409,
/// reads wait for it.
///
///   GET  /volumes
///   GET  /volumes/{id}/slices/{z}?window=lo,hi
///   POST /sessions                         {volume, z0, template, seed, params}
///   GET  /sessions/{id}
///   POST /sessions/{id}/advance            {direction, skip, params?}
///   POST /sessions/{id}/redraw             {template, seed, params?}
///   POST /sessions/{id}/finalize           {reference?}
///   GET  /sessions/{id}/export/mask        NRRD bytes
///   GET  /sessions/{id}/export/contours    contour JSON
///   GET  /sessions/{id}/events             replay document
///
/// Errors carry {code, reason, detail}.
class Service {
public:
    explicit Service(std::filesystem::path data_dir);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds to `port` (0 picks a free one) and returns the bound port, or -1.
    int bind(const std::string& host, int port);
    /// Serves until stop(); call after bind().
    bool listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace tgcut
