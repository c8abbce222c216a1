#include "tgcut/contours.hpp"

#include <cmath>

#include <json.hpp>

#include "tgcut/error.hpp"

namespace tgcut {
namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& msg) {
    throw ParseError("contour set " + path + ": " + msg, "schema-violation");
}

const json& require(const json& obj, const char* key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) schema_error(path, std::string("missing field \"") + key + "\"");
    return *it;
}

} // namespace

std::string_view to_string(Provenance p) {
    switch (p) {
    case Provenance::UserDrawn: return "user-drawn";
    case Provenance::Computed: return "computed";
    case Provenance::Interpolated: return "interpolated";
    }
    return "computed";
}

Provenance provenance_from_string(std::string_view s) {
    if (s == "user-drawn") return Provenance::UserDrawn;
    if (s == "computed") return Provenance::Computed;
    if (s == "interpolated") return Provenance::Interpolated;
    throw ParseError("unknown provenance \"" + std::string(s) + "\"", "schema-violation");
}

void ContourSet::put(Contour c) {
    if (c.vertices.size() < 3) {
        throw ArgumentError("contour on slice " + std::to_string(c.z) + " has fewer than 3 vertices");
    }
    for (const auto& v : c.vertices) {
        if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
            throw ArgumentError("contour on slice " + std::to_string(c.z) + " has a non-finite vertex");
        }
    }
    const int z = c.z;
    slices.insert_or_assign(z, std::move(c));
}

std::string write_contour_set(const ContourSet& cs) {
    json doc;
    doc["object"] = cs.object;
    doc["slices"] = json::array();
    for (const auto& [z, c] : cs.slices) {
        json verts = json::array();
        for (const auto& v : c.vertices) verts.push_back({v.x, v.y});
        doc["slices"].push_back(
            {{"z", z}, {"provenance", std::string(to_string(c.provenance))}, {"vertices", verts}});
    }
    return doc.dump(2);
}

ContourSet read_contour_set(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("contour set is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) schema_error("/", "document must be an object");

    ContourSet cs;
    if (const auto it = doc.find("object"); it != doc.end()) {
        if (!it->is_string()) schema_error("/object", "must be a string");
        cs.object = it->get<std::string>();
    }
    const json& slices = require(doc, "slices", "/");
    if (!slices.is_array()) schema_error("/slices", "must be an array");

    for (std::size_t i = 0; i < slices.size(); ++i) {
        const std::string path = "/slices/" + std::to_string(i);
        const json& s = slices[i];
        if (!s.is_object()) schema_error(path, "must be an object");

        Contour c;
        const json& z = require(s, "z", path);
        if (!z.is_number_integer()) schema_error(path + "/z", "must be an integer");
        c.z = z.get<int>();

        const json& prov = require(s, "provenance", path);
        if (!prov.is_string()) schema_error(path + "/provenance", "must be a string");
        try {
            c.provenance = provenance_from_string(prov.get<std::string>());
        } catch (const ParseError&) {
            schema_error(path + "/provenance", "unknown value \"" + prov.get<std::string>() + "\"");
        }

        const json& verts = require(s, "vertices", path);
        if (!verts.is_array()) schema_error(path + "/vertices", "must be an array");
        if (verts.size() < 3) schema_error(path + "/vertices", "needs at least 3 vertices");
        for (std::size_t j = 0; j < verts.size(); ++j) {
            const json& v = verts[j];
            const std::string vpath = path + "/vertices/" + std::to_string(j);
            if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
                schema_error(vpath, "must be [x, y]");
            }
            const Point2 p{v[0].get<double>(), v[1].get<double>()};
            if (!std::isfinite(p.x) || !std::isfinite(p.y)) schema_error(vpath, "must be finite");
            c.vertices.push_back(p);
        }
        if (cs.slices.contains(c.z)) schema_error(path + "/z", "duplicate contour for slice");
        cs.slices.emplace(c.z, std::move(c));
    }
    return cs;
}

} // namespace tgcut
