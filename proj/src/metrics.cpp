#include "tgcut/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "tgcut/error.hpp"

namespace tgcut {
namespace {

void require_same_geometry(const MaskVolume& a, const MaskVolume& b) {
    if (a.geometry().sizes != b.geometry().sizes) {
        throw ArgumentError("mask geometries differ", "geometry-mismatch");
    }
}

std::size_t count_set(const MaskVolume& m) {
    return static_cast<std::size_t>(std::count(m.values().begin(), m.values().end(), std::uint8_t{1}));
}

constexpr double kFar = std::numeric_limits<double>::infinity();

// Exact 1D squared distance transform (lower envelope of parabolas) over
// `f`, in place. Sites with infinite value are skipped.
void distance_transform_1d(std::vector<double>& f, std::vector<int>& v, std::vector<double>& z,
                           std::vector<double>& out) {
    const int n = static_cast<int>(f.size());
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[q] == kFar) continue;
        while (k >= 0) {
            const int p = v[k];
            const double s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
            if (s <= z[k]) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[k] = q;
        z[k] = k == 0 ? -kFar : ((f[q] + double(q) * q) - (f[v[k - 1]] + double(v[k - 1]) * v[k - 1])) /
                                     (2.0 * (q - v[k - 1]));
        z[k + 1] = kFar;
    }
    if (k < 0) {
        std::fill(f.begin(), f.end(), kFar);
        return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (z[j + 1] < q) ++j;
        const double d = q - v[j];
        out[q] = d * d + f[v[j]];
    }
    std::copy(out.begin(), out.begin() + n, f.begin());
}

// Squared Euclidean distance (voxel units) to the nearest set voxel.
std::vector<double> squared_edt(const MaskVolume& m) {
    const auto [nx, ny, nz] = m.geometry().sizes;
    std::vector<double> d(m.values().size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = m.values()[i] ? 0.0 : kFar;

    const std::size_t longest = std::max({nx, ny, nz});
    std::vector<double> line(longest);
    std::vector<double> out(longest);
    std::vector<int> v(longest);
    std::vector<double> z(longest + 1);

    auto pass = [&](std::size_t len, std::size_t stride, auto&& starts) {
        line.resize(len);
        for (std::size_t start : starts) {
            for (std::size_t i = 0; i < len; ++i) line[i] = d[start + i * stride];
            distance_transform_1d(line, v, z, out);
            for (std::size_t i = 0; i < len; ++i) d[start + i * stride] = line[i];
        }
    };

    std::vector<std::size_t> starts;
    for (std::size_t zz = 0; zz < nz; ++zz)
        for (std::size_t y = 0; y < ny; ++y) starts.push_back(nx * (y + ny * zz));
    pass(nx, 1, starts);

    starts.clear();
    for (std::size_t zz = 0; zz < nz; ++zz)
        for (std::size_t x = 0; x < nx; ++x) starts.push_back(x + nx * ny * zz);
    pass(ny, nx, starts);

    starts.clear();
    for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t x = 0; x < nx; ++x) starts.push_back(x + nx * y);
    pass(nz, nx * ny, starts);
    return d;
}

double directed_hausdorff(const MaskVolume& from, const std::vector<double>& to_edt) {
    double worst = 0.0;
    for (std::size_t i = 0; i < from.values().size(); ++i) {
        if (from.values()[i]) worst = std::max(worst, to_edt[i]);
    }
    return std::sqrt(worst);
}

} // namespace

double dsc(const MaskVolume& a, const MaskVolume& b) {
    require_same_geometry(a, b);
    std::size_t na = 0;
    std::size_t nb = 0;
    std::size_t both = 0;
    for (std::size_t i = 0; i < a.values().size(); ++i) {
        const bool in_a = a.values()[i] != 0;
        const bool in_b = b.values()[i] != 0;
        na += in_a;
        nb += in_b;
        both += in_a && in_b;
    }
    if (na + nb == 0) return 100.0;
    return 100.0 * 2.0 * static_cast<double>(both) / static_cast<double>(na + nb);
}

double hausdorff(const MaskVolume& a, const MaskVolume& b) {
    require_same_geometry(a, b);
    if (count_set(a) == 0 || count_set(b) == 0) {
        throw ArgumentError("Hausdorff distance needs two non-empty masks", "empty-mask");
    }
    return std::max(directed_hausdorff(a, squared_edt(b)), directed_hausdorff(b, squared_edt(a)));
}

VolumeStats volume_stats(const MaskVolume& m) {
    VolumeStats s;
    s.voxels = count_set(m);
    const auto& sp = m.geometry().spacing;
    s.cm3 = static_cast<double>(s.voxels) * sp[0] * sp[1] * sp[2] / 1000.0;
    return s;
}

Summary summarize(const std::vector<double>& values) {
    if (values.size() < 2) throw ArgumentError("summary statistics need at least two values");
    Summary s;
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.min = *lo;
    s.max = *hi;
    return s;
}

OverlapReport compare_masks(const MaskVolume& a, const MaskVolume& b, std::string label) {
    OverlapReport r;
    r.label = std::move(label);
    r.dsc = dsc(a, b);
    r.hausdorff = hausdorff(a, b);
    r.a = volume_stats(a);
    r.b = volume_stats(b);
    return r;
}

nlohmann::json report_to_json(const std::vector<OverlapReport>& reports) {
    nlohmann::json doc;
    doc["datasets"] = nlohmann::json::array();
    std::vector<double> dscs;
    std::vector<double> hds;
    for (const auto& r : reports) {
        doc["datasets"].push_back({{"label", r.label},
                                   {"dsc", r.dsc},
                                   {"hausdorff", r.hausdorff},
                                   {"voxels_a", r.a.voxels},
                                   {"voxels_b", r.b.voxels},
                                   {"volume_a_cm3", r.a.cm3},
                                   {"volume_b_cm3", r.b.cm3}});
        dscs.push_back(r.dsc);
        hds.push_back(r.hausdorff);
    }
    if (reports.size() >= 2) {
        auto to_json = [](const Summary& s) {
            return nlohmann::json{{"mean", s.mean}, {"std", s.std}, {"min", s.min}, {"max", s.max}};
        };
        doc["summary"] = {{"dsc", to_json(summarize(dscs))}, {"hausdorff", to_json(summarize(hds))}};
    }
    return doc;
}

std::string report_to_table(const std::vector<OverlapReport>& reports) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-16s %16s %24s %12s %12s\n", "Data set", "DSC (%)",
                  "Hausdorff Dist. (Voxel)", "Vol A (cm3)", "Vol B (cm3)");
    out += line;
    std::vector<double> dscs;
    std::vector<double> hds;
    for (const auto& r : reports) {
        std::snprintf(line, sizeof line, "%-16s %16.2f %24.2f %12.2f %12.2f\n", r.label.c_str(), r.dsc, r.hausdorff,
                      r.a.cm3, r.b.cm3);
        out += line;
        dscs.push_back(r.dsc);
        hds.push_back(r.hausdorff);
    }
    if (reports.size() >= 2) {
        const Summary d = summarize(dscs);
        const Summary h = summarize(hds);
        char dbuf[64];
        char hbuf[64];
        std::snprintf(dbuf, sizeof dbuf, "%.2f +- %.2f", d.mean, d.std);
        std::snprintf(hbuf, sizeof hbuf, "%.2f +- %.2f", h.mean, h.std);
        std::snprintf(line, sizeof line, "%-16s %16s %24s\n", "mean +- std", dbuf, hbuf);
        out += line;
        std::snprintf(line, sizeof line, "%-16s %16.2f %24.2f\n", "min", d.min, h.min);
        out += line;
        std::snprintf(line, sizeof line, "%-16s %16.2f %24.2f\n", "max", d.max, h.max);
        out += line;
    }
    return out;
}

} // namespace tgcut
