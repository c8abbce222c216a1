#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tgcut/geometry_types.hpp"

namespace tgcut {

enum class Provenance { UserDrawn, Computed, Interpolated };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

/// Closed polygon on one axial slice. The last vertex connects to the first.
struct Contour {
    int z = 0;
    Provenance provenance = Provenance::Computed;
    std::vector<Point2> vertices;

    bool operator==(const Contour&) const = default;
};

/// Per-slice contours of one object, at most one per slice.
struct ContourSet {
    std::string object;
    std::map<int, Contour> slices;

    /// Inserts or replaces the contour on `c.z`. Throws on < 3 or non-finite vertices.
    void put(Contour c);

    bool operator==(const ContourSet&) const = default;
};

// JSON document: {"object": str, "slices": [{"z", "provenance", "vertices": [[x,y],...]}]}
std::string write_contour_set(const ContourSet& cs);
ContourSet read_contour_set(std::string_view json_text);

} // namespace tgcut
