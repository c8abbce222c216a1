#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tgcut/contours.hpp"
#include "tgcut/geometry.hpp"
#include "tgcut/graph_cut.hpp"
#include "tgcut/volume.hpp"

namespace tgcut {

enum class SessionStatus { Reviewing, Finalized };

std::string_view to_string(SessionStatus s);

/// Resamples a contour at k uniform angles about its own centroid and
/// returns the per-angle radii (farthest outline crossing, 0 if none).
std::vector<double> radial_profile(const std::vector<Point2>& contour, Point2 center, std::size_t k);

/// Linear blend of two contours in centroid and per-angle radius.
std::vector<Point2> blend_contours(const std::vector<Point2>& a, const std::vector<Point2>& b, double w,
                                   std::size_t k);

/// Fills every slice in [z_lo, z_hi] that lacks a drawn or computed contour
/// by blending its nearest bracketing contours. Previously interpolated
/// contours are recomputed. Returns the filled slices; throws
/// InterpolationError listing slices without a bracketing pair.
std::vector<int> interpolate_gaps(ContourSet& contours, int z_lo, int z_hi, std::size_t k);

struct FinalizeReport {
    std::vector<int> interpolated;
    int z_min = 0;
    int z_max = 0;
    double elapsed_seconds = 0.0;
};

struct ExportBundle {
    std::string contours_json;
    std::string mask_nrrd;
};

/// Slice-by-slice propagation of a template-driven cut through a volume.
/// Every computed slice contour is kept; advancing derives the next
/// template from the last cut scaled by sf about its centroid.
/// Single-writer: callers serialise mutations.
class Session {
public:
    /// Segments slice z0 with the user-drawn template (used unscaled).
    static Session start(std::shared_ptr<const Volume3D> volume, int z0, Template tmpl, SeedPoint seed,
                         GraphParams params, std::string object = "object");

    /// Steps `skip` slices past the extreme segmented slice in `direction`.
    /// New `params`, when given, apply from this step on and are logged.
    const SliceTrace& accept_and_advance(int direction, int skip, std::optional<GraphParams> params = {});

    /// Replaces the current slice's template and seed and recomputes its cut.
    const SliceTrace& redraw(Template tmpl, SeedPoint seed, std::optional<GraphParams> params = {});

    std::vector<int> interpolate_missing();
    FinalizeReport finalize();

    MaskVolume voxelize() const;
    ExportBundle export_files() const;

    SessionStatus status() const { return status_; }
    int current_slice() const { return current_z_; }
    const SliceTrace& current() const { return trace_; }
    const Template& current_template() const { return template_; }
    const SeedPoint& current_seed() const { return seed_; }
    const GraphParams& params() const { return params_; }
    const ContourSet& contours() const { return contours_; }
    const Volume3D& volume() const { return *volume_; }

    /// Append-only log; replay() on it reproduces this session.
    const nlohmann::json& event_log() const { return log_; }
    double elapsed_seconds() const;

private:
    Session() = default;

    void compute(int z, Template tmpl, SeedPoint seed, Provenance provenance);
    void log_event(nlohmann::json event);
    /// Swaps in `params` if present; returns the previous set for rollback.
    GraphParams apply_params(const std::optional<GraphParams>& params, nlohmann::json& event);
    void require_reviewing(const char* op) const;

    std::shared_ptr<const Volume3D> volume_;
    GraphParams params_;
    ContourSet contours_;
    SessionStatus status_ = SessionStatus::Reviewing;
    int current_z_ = 0;
    Template template_;
    SeedPoint seed_;
    SliceTrace trace_;
    nlohmann::json log_;
    std::chrono::steady_clock::time_point started_;
};

nlohmann::json params_to_json(const GraphParams& p);
GraphParams params_from_json(const nlohmann::json& j, GraphParams defaults = {});
nlohmann::json points_to_json(const std::vector<Point2>& pts);
std::vector<Point2> points_from_json(const nlohmann::json& j, const std::string& path);

/// Re-executes a replay document. `overrides`, when given, replaces the
/// parameters recorded in the start event.
Session replay(std::shared_ptr<const Volume3D> volume, const nlohmann::json& log,
               const GraphParams* overrides = nullptr);

} // namespace tgcut
