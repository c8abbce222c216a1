#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tgcut/error.hpp"
#include "tgcut/graph_cut.hpp"
#include "tgcut/metrics.hpp"
#include "tgcut/nrrd.hpp"
#include "tgcut/phantom.hpp"
#include "tgcut/session.hpp"

namespace py = pybind11;
using namespace tgcut;

namespace {

using Points = std::vector<std::array<double, 2>>;

std::vector<Point2> to_points(const Points& pts) {
    std::vector<Point2> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back({p[0], p[1]});
    return out;
}

Points from_points(const std::vector<Point2>& pts) {
    Points out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back({p.x, p.y});
    return out;
}

// Arrays are indexed [z, y, x].
template <typename T>
py::array_t<T> as_array(const VolumeGeometry& g, const std::vector<T>& values) {
    py::array_t<T> a({g.sizes[2], g.sizes[1], g.sizes[0]});
    std::copy(values.begin(), values.end(), a.mutable_data());
    return a;
}

template <typename T>
std::pair<VolumeGeometry, std::vector<T>> from_array(py::array_t<T, py::array::c_style | py::array::forcecast> a,
                                                      std::array<double, 3> spacing) {
    if (a.ndim() != 3) throw ArgumentError("expected a 3-d array indexed [z, y, x]");
    VolumeGeometry g{{static_cast<std::size_t>(a.shape(2)), static_cast<std::size_t>(a.shape(1)),
                      static_cast<std::size_t>(a.shape(0))},
                     spacing};
    return {g, std::vector<T>(a.data(), a.data() + a.size())};
}

py::dict cut_dict(const CutResult& r) {
    py::dict d;
    d["boundary"] = r.boundary;
    d["contour"] = from_points(r.contour);
    d["cut_cost"] = r.cut_cost;
    d["flow_value"] = r.flow_value;
    return d;
}

PixelType pixel_type_from(const std::string& s) {
    if (s == "uint8") return PixelType::UInt8;
    if (s == "int16") return PixelType::Int16;
    if (s == "float") return PixelType::Float32;
    throw ArgumentError("pixel type must be uint8, int16 or float");
}

} // namespace

PYBIND11_MODULE(_tgcut, m) {
    m.doc() = "Template-driven graph-cut segmentation core";

    static py::exception<Error> error(m, "TgcutError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            // args = (reason, message)
            PyErr_SetObject(error.ptr(), py::make_tuple(e.reason(), e.what()).ptr());
        }
    });

    py::class_<Volume3D, std::shared_ptr<Volume3D>>(m, "Volume")
        .def(py::init([](py::array_t<float, py::array::c_style | py::array::forcecast> values,
                         std::array<double, 3> spacing, const std::string& pixel_type) {
                 auto [g, v] = from_array<float>(values, spacing);
                 return std::make_shared<Volume3D>(g, pixel_type_from(pixel_type), std::move(v));
             }),
             py::arg("values"), py::arg("spacing") = std::array<double, 3>{1, 1, 1},
             py::arg("pixel_type") = "float")
        .def_property_readonly("sizes", [](const Volume3D& v) { return v.geometry().sizes; })
        .def_property_readonly("spacing", [](const Volume3D& v) { return v.geometry().spacing; })
        .def_property_readonly("pixel_type", [](const Volume3D& v) { return std::string(to_string(v.pixel_type())); })
        .def_property_readonly("values", [](const Volume3D& v) { return as_array(v.geometry(), v.values()); })
        .def("to_nrrd", [](const Volume3D& v) { return py::bytes(write_nrrd(v)); });

    py::class_<MaskVolume>(m, "Mask")
        .def(py::init([](py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast> values,
                         std::array<double, 3> spacing) {
                 auto [g, v] = from_array<std::uint8_t>(values, spacing);
                 return MaskVolume(g, std::move(v));
             }),
             py::arg("values"), py::arg("spacing") = std::array<double, 3>{1, 1, 1})
        .def_property_readonly("sizes", [](const MaskVolume& v) { return v.geometry().sizes; })
        .def_property_readonly("spacing", [](const MaskVolume& v) { return v.geometry().spacing; })
        .def_property_readonly("values", [](const MaskVolume& v) { return as_array(v.geometry(), v.values()); })
        .def("to_nrrd", [](const MaskVolume& v) { return py::bytes(write_nrrd(v)); })
        .def("__eq__", [](const MaskVolume& a, const MaskVolume& b) { return a == b; });

    m.def("read_nrrd", [](const py::bytes& b) { return std::make_shared<Volume3D>(read_nrrd(std::string(b))); });
    m.def("load_nrrd", [](const std::string& path) { return std::make_shared<Volume3D>(read_nrrd(read_file(path))); });
    m.def("to_mask", &to_mask);

    py::class_<GraphParams>(m, "GraphParams")
        .def(py::init([](std::size_t k, std::size_t n, int delta, double t_weight, double sf) {
                 GraphParams p{k, n, delta, t_weight, sf};
                 p.validate();
                 return p;
             }),
             py::arg("k") = 40, py::arg("n") = 40, py::arg("delta") = 2, py::arg("t_weight") = 0.2,
             py::arg("sf") = 1.6)
        .def_readwrite("k", &GraphParams::k)
        .def_readwrite("n", &GraphParams::n)
        .def_readwrite("delta", &GraphParams::delta)
        .def_readwrite("t_weight", &GraphParams::t_weight)
        .def_readwrite("sf", &GraphParams::sf)
        .def("__eq__", [](const GraphParams& a, const GraphParams& b) { return a == b; })
        .def("__repr__", [](const GraphParams& p) { return "GraphParams(" + params_to_json(p).dump() + ")"; });

    m.def(
        "generate_phantom",
        [](const std::string& spec_json) {
            const PhantomSpec spec = spec_json.empty() ? PhantomSpec{} : phantom_from_json(nlohmann::json::parse(spec_json));
            auto [vol, truth] = generate_phantom(spec);
            return std::make_pair(std::make_shared<Volume3D>(std::move(vol)), std::move(truth));
        },
        py::arg("spec_json") = "");

    m.def(
        "segment_one_slice",
        [](const Volume3D& vol, int z, const Points& tmpl, std::array<double, 2> seed, const GraphParams& params) {
            if (z < 0) throw IndexError("slice index must be non-negative");
            const Slice2D slice = extract_slice(vol, static_cast<std::size_t>(z));
            return cut_dict(segment_one_slice(slice, Template{to_points(tmpl), z}, SeedPoint{{seed[0], seed[1]}, z},
                                              params));
        },
        py::arg("volume"), py::arg("z"), py::arg("template"), py::arg("seed"), py::arg("params") = GraphParams{});

    py::class_<Session>(m, "Session")
        .def_static(
            "start",
            [](std::shared_ptr<Volume3D> vol, int z0, const Points& tmpl, std::array<double, 2> seed,
               const GraphParams& params, const std::string& object) {
                return Session::start(std::move(vol), z0, Template{to_points(tmpl), z0},
                                      SeedPoint{{seed[0], seed[1]}, z0}, params, object);
            },
            py::arg("volume"), py::arg("z0"), py::arg("template"), py::arg("seed"), py::arg("params") = GraphParams{},
            py::arg("object") = "object")
        .def(
            "accept_and_advance",
            [](Session& s, int direction, int skip, std::optional<GraphParams> params) {
                return cut_dict(s.accept_and_advance(direction, skip, params).cut);
            },
            py::arg("direction") = 1, py::arg("skip") = 1, py::arg("params") = py::none())
        .def(
            "redraw",
            [](Session& s, const Points& tmpl, std::array<double, 2> seed, std::optional<GraphParams> params) {
                return cut_dict(s.redraw(Template{to_points(tmpl), s.current_slice()},
                                         SeedPoint{{seed[0], seed[1]}, s.current_slice()}, params)
                                    .cut);
            },
            py::arg("template"), py::arg("seed"), py::arg("params") = py::none())
        .def("interpolate_missing", &Session::interpolate_missing)
        .def("finalize",
             [](Session& s) {
                 const FinalizeReport r = s.finalize();
                 py::dict d;
                 d["interpolated"] = r.interpolated;
                 d["z_range"] = std::make_pair(r.z_min, r.z_max);
                 d["elapsed_seconds"] = r.elapsed_seconds;
                 return d;
             })
        .def("voxelize", &Session::voxelize)
        .def("export",
             [](const Session& s) {
                 const ExportBundle b = s.export_files();
                 return py::make_tuple(py::bytes(b.contours_json), py::bytes(b.mask_nrrd));
             })
        .def_property_readonly("status", [](const Session& s) { return std::string(to_string(s.status())); })
        .def_property_readonly("current_slice", &Session::current_slice)
        .def_property_readonly("params", &Session::params)
        .def_property_readonly("current_cut", [](const Session& s) { return cut_dict(s.current().cut); })
        .def_property_readonly("contours_json", [](const Session& s) { return write_contour_set(s.contours()); })
        .def_property_readonly("event_log_json", [](const Session& s) { return s.event_log().dump(); });

    m.def(
        "replay",
        [](std::shared_ptr<Volume3D> vol, const std::string& log_json) {
            nlohmann::json log;
            try {
                log = nlohmann::json::parse(log_json);
            } catch (const nlohmann::json::parse_error& e) {
                throw ParseError(std::string("replay is not valid JSON: ") + e.what());
            }
            return replay(std::move(vol), log);
        },
        py::arg("volume"), py::arg("log_json"));

    m.def("dsc", &dsc);
    m.def("hausdorff", &hausdorff);
    m.def("volume_stats", [](const MaskVolume& mk) {
        const VolumeStats s = volume_stats(mk);
        return py::make_tuple(s.voxels, s.cm3);
    });
    m.def("summarize", [](const std::vector<double>& v) {
        const Summary s = summarize(v);
        py::dict d;
        d["mean"] = s.mean;
        d["std"] = s.std;
        d["min"] = s.min;
        d["max"] = s.max;
        return d;
    });
}
