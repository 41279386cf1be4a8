#pragma once

#include "sonoloc/beamform/heatmap.hpp"

#include <filesystem>

namespace sonoloc::io {

/// Writes `<stem>.bin` (little-endian float32, row-major ny x nx) and the
/// `<stem>.json` sidecar with grid geometry, time window, video frame and the
/// normalization flag. Returns the sidecar path.
std::filesystem::path write_heatmap(const std::filesystem::path& stem, const beamform::AcousticHeatmap& heatmap);

/// Reads a heatmap through its sidecar; also accepts externally produced files
/// in the same format. Throws FormatError.
beamform::AcousticHeatmap read_heatmap(const std::filesystem::path& sidecar);

/// Rounds every value to float32, the precision heatmaps have on disk.
beamform::AcousticHeatmap quantize_heatmap(beamform::AcousticHeatmap heatmap);

}  // namespace sonoloc::io
