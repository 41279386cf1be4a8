#pragma once

#include "sonoloc/fusion/point_cloud.hpp"

#include <filesystem>

namespace sonoloc::io {

/// ASCII PLY with float x, y, z (and uchar red, green, blue when colored).
void write_ply(const std::filesystem::path& path, const fusion::PointCloud& cloud);

/// ASCII PLY with float x, y, z, weight.
void write_weighted_ply(const std::filesystem::path& path, const fusion::WeightedPointCloud& cloud);

/// Reads an ASCII PLY vertex element. Colors are kept when red, green and
/// blue are all present. Throws FormatError.
fusion::PointCloud read_ply(const std::filesystem::path& path);

/// Requires a `weight` vertex property.
fusion::WeightedPointCloud read_weighted_ply(const std::filesystem::path& path);

}  // namespace sonoloc::io
