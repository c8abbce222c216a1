#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "tgcut/volume.hpp"

namespace tgcut {

/// Dice similarity coefficient in percent. Two empty masks score 100.
double dsc(const MaskVolume& a, const MaskVolume& b);

/// Symmetric Hausdorff distance between set-voxel centres, in voxel index
/// units (spacing ignored). Both masks must be non-empty.
double hausdorff(const MaskVolume& a, const MaskVolume& b);

struct VolumeStats {
    std::size_t voxels = 0;
    double cm3 = 0.0;
};

VolumeStats volume_stats(const MaskVolume& m);

struct Summary {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation (n - 1)
    double min = 0.0;
    double max = 0.0;
};

/// Needs at least two values.
Summary summarize(const std::vector<double>& values);

struct OverlapReport {
    std::string label;
    double dsc = 0.0;
    double hausdorff = 0.0;
    VolumeStats a;
    VolumeStats b;
};

OverlapReport compare_masks(const MaskVolume& a, const MaskVolume& b, std::string label);

nlohmann::json report_to_json(const std::vector<OverlapReport>& reports);

/// Aligned text table: one row per dataset, then mean +- std, min and max
/// rows when there are at least two datasets.
std::string report_to_table(const std::vector<OverlapReport>& reports);

} // namespace tgcut
