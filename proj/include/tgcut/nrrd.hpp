#pragma once

#include <string>
#include <string_view>

#include "tgcut/volume.hpp"

namespace tgcut {

// NRRD subset: dimension 3, encodings raw|ascii, types uint8|int16|float,
// either endianness on read, little-endian on write.
Volume3D read_nrrd(std::string_view bytes);

std::string write_nrrd(const Volume3D& vol);
std::string write_nrrd(const MaskVolume& mask);

/// Interprets any non-zero voxel as foreground.
MaskVolume to_mask(const Volume3D& vol);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

/// Shortest decimal that round-trips the double, always with a '.' or exponent.
std::string format_decimal(double v);

} // namespace tgcut
