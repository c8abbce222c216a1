#include "tgcut/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "tgcut/contours.hpp"
#include "tgcut/error.hpp"
#include "tgcut/metrics.hpp"
#include "tgcut/nrrd.hpp"
#include "tgcut/phantom.hpp"
#include "tgcut/raster.hpp"
#include "tgcut/service.hpp"
#include "tgcut/session.hpp"

namespace tgcut {

namespace {

nlohmann::json parse_json_file(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

struct ParamFlags {
    std::optional<std::size_t> k;
    std::optional<std::size_t> n;
    std::optional<int> delta;
    std::optional<double> t_weight;
    std::optional<double> sf;

    void attach(CLI::App* cmd) {
        cmd->add_option("--k", k, "Rays per slice (default 40)");
        cmd->add_option("--n", n, "Nodes per ray (default 40)");
        cmd->add_option("--delta", delta, "Smoothness bound, 0..2 (default 2)");
        cmd->add_option("--t-weight", t_weight, "Contrast sensitivity (default 0.2)");
        cmd->add_option("--sf", sf, "Template scale factor (default 1.6)");
    }
    bool any() const { return k || n || delta || t_weight || sf; }
    GraphParams over(GraphParams p) const {
        if (k) p.k = *k;
        if (n) p.n = *n;
        if (delta) p.delta = *delta;
        if (t_weight) p.t_weight = *t_weight;
        if (sf) p.sf = *sf;
        return p;
    }
};

int do_segment(const std::string& volume_path, const std::string& replay_path, const std::string& mask_path,
               const std::string& contours_path, const ParamFlags& flags, std::ostream& out) {
    auto volume = std::make_shared<const Volume3D>(read_nrrd(read_file(volume_path)));
    const nlohmann::json log = parse_json_file(replay_path);
    std::optional<GraphParams> overrides;
    if (flags.any()) {
        GraphParams recorded;
        if (log.contains("events") && log["events"].is_array() && !log["events"].empty() &&
            log["events"][0].contains("params")) {
            recorded = params_from_json(log["events"][0]["params"]);
        }
        overrides = flags.over(recorded);
    }
    Session s = replay(volume, log, overrides ? &*overrides : nullptr);
    if (s.status() != SessionStatus::Finalized) s.finalize();
    const ExportBundle bundle = s.export_files();
    if (!mask_path.empty()) write_file(mask_path, bundle.mask_nrrd);
    if (!contours_path.empty()) write_file(contours_path, bundle.contours_json);
    const VolumeStats stats = volume_stats(s.voxelize());
    out << "segmented " << s.contours().slices.size() << " slices, " << stats.voxels << " voxels, "
        << stats.cm3 << " cm3\n";
    return kExitOk;
}

int do_evaluate(const std::vector<std::string>& as, const std::vector<std::string>& bs,
                std::vector<std::string> labels, const std::string& report_path, std::ostream& out) {
    if (as.size() != bs.size()) throw ArgumentError("--a and --b must be given the same number of times");
    if (!labels.empty() && labels.size() != as.size()) {
        throw ArgumentError("--label must be given once per --a/--b pair");
    }
    std::vector<OverlapReport> reports;
    for (std::size_t i = 0; i < as.size(); ++i) {
        const MaskVolume a = to_mask(read_nrrd(read_file(as[i])));
        const MaskVolume b = to_mask(read_nrrd(read_file(bs[i])));
        reports.push_back(compare_masks(a, b, labels.empty() ? std::to_string(i + 1) : labels[i]));
    }
    if (!report_path.empty()) write_file(report_path, report_to_json(reports).dump(2) + "\n");
    out << report_to_table(reports);
    return kExitOk;
}

int do_phantom(const std::string& spec_path, const std::string& volume_path, const std::string& truth_path,
               const std::string& session_path, std::ostream& out) {
    const PhantomSpec spec = spec_path.empty() ? PhantomSpec{} : phantom_from_json(parse_json_file(spec_path));
    const auto [vol, truth] = generate_phantom(spec);
    write_file(volume_path, write_nrrd(vol));
    if (!truth_path.empty()) write_file(truth_path, write_nrrd(truth));
    if (!session_path.empty()) write_file(session_path, phantom_session_script(spec).dump(2) + "\n");
    out << "phantom " << spec.sizes[0] << "x" << spec.sizes[1] << "x" << spec.sizes[2] << ", "
        << volume_stats(truth).voxels << " object voxels\n";
    return kExitOk;
}

int do_convert(const std::string& contours_path, const std::string& reference_path, const std::string& mask_path,
               std::ostream& out) {
    const ContourSet cs = read_contour_set(read_file(contours_path));
    const Volume3D ref = read_nrrd(read_file(reference_path));
    const MaskVolume mask = voxelize(cs, ref.geometry());
    write_file(mask_path, write_nrrd(mask));
    out << "voxelized " << cs.slices.size() << " contours, " << volume_stats(mask).voxels << " voxels\n";
    return kExitOk;
}

int do_serve(const std::string& host, int port, const std::string& data_dir, std::ostream& out) {
    Service service(data_dir);
    const int bound = service.bind(host, port);
    if (bound < 0) throw ArgumentError("cannot bind " + host + ":" + std::to_string(port), "io-error");
    out << "listening on http://" << host << ":" << bound << "\n" << std::flush;
    return service.listen() ? kExitOk : kExitInternal;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Template-driven graph-cut segmentation of tubular structures", "tgcut"};
    app.require_subcommand(1);

    std::string volume_path, replay_path, mask_path, contours_path;
    ParamFlags flags;
    auto* segment = app.add_subcommand("segment", "Replay a session file on a volume and export the result");
    segment->add_option("--volume", volume_path, "Input NRRD volume")->required();
    segment->add_option("--replay", replay_path, "Session replay JSON")->required();
    segment->add_option("--out-mask", mask_path, "Output mask NRRD");
    segment->add_option("--out-contours", contours_path, "Output contour JSON");
    flags.attach(segment);

    std::vector<std::string> as, bs, labels;
    std::string report_path;
    auto* evaluate = app.add_subcommand("evaluate", "Compare mask pairs: DSC, Hausdorff distance, volumes");
    evaluate->add_option("--a", as, "First mask of a pair (repeatable)")->required();
    evaluate->add_option("--b", bs, "Second mask of a pair (repeatable)")->required();
    evaluate->add_option("--label", labels, "Dataset label per pair (repeatable)");
    evaluate->add_option("--report", report_path, "Write the JSON report here");

    std::string spec_path, phantom_volume, phantom_truth, phantom_session;
    auto* phantom = app.add_subcommand("phantom", "Generate a synthetic tube volume with ground truth");
    phantom->add_option("--spec", spec_path, "Phantom spec JSON (defaults when omitted)");
    phantom->add_option("--out-volume", phantom_volume, "Output volume NRRD")->required();
    phantom->add_option("--out-truth", phantom_truth, "Output ground-truth mask NRRD");
    phantom->add_option("--out-session", phantom_session,
                        "Write a session file that segments the phantom (every second slice)");

    std::string convert_contours, convert_reference, convert_mask;
    auto* convert = app.add_subcommand("convert", "Voxelize a contour JSON onto a reference volume's grid");
    convert->add_option("--contours", convert_contours, "Contour JSON")->required();
    convert->add_option("--reference", convert_reference, "NRRD giving the output geometry")->required();
    convert->add_option("--out-mask", convert_mask, "Output mask NRRD")->required();

    std::string host = "127.0.0.1", data_dir = ".";
    int port = 8080;
    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    serve->add_option("--port", port, "TCP port (0 picks a free one)");
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--data-dir", data_dir, "Directory with .nrrd volumes")->check(CLI::ExistingDirectory);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*segment) {
            if (mask_path.empty() && contours_path.empty()) {
                err << "segment: give --out-mask and/or --out-contours\n";
                return kExitUsage;
            }
            return do_segment(volume_path, replay_path, mask_path, contours_path, flags, out);
        }
        if (*evaluate) return do_evaluate(as, bs, labels, report_path, out);
        if (*phantom) return do_phantom(spec_path, phantom_volume, phantom_truth, phantom_session, out);
        if (*convert) return do_convert(convert_contours, convert_reference, convert_mask, out);
        if (*serve) return do_serve(host, port, data_dir, out);
    } catch (const InternalError& e) {
        err << "internal error [" << e.reason() << "]: " << e.what() << "\n";
        return kExitInternal;
    } catch (const Error& e) {
        err << "error [" << e.reason() << "]: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}

} // namespace tgcut
