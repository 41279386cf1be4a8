#include "sonoloc/beamform/heatmap.hpp"

#include "sonoloc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace sonoloc::beamform {

void ScanGrid::validate() const {
    if (!(distance > 0.0)) throw InvalidArgument("scan grid: distance must be positive");
    if (!(width > 0.0) || !(height > 0.0)) throw InvalidArgument("scan grid: width and height must be positive");
    if (nx < 2 || ny < 2) throw InvalidArgument("scan grid: need at least 2 cells per axis");
}

Vec3 ScanGrid::cell_center(std::size_t ix, std::size_t iy) const {
    return {-width / 2.0 + (static_cast<double>(ix) + 0.5) * cell_width(),
            -height / 2.0 + (static_cast<double>(iy) + 0.5) * cell_height(), distance};
}

Eigen::Vector2d ScanGrid::plane_to_cell(double x, double y) const {
    return {(x + width / 2.0) / cell_width() - 0.5, (y + height / 2.0) / cell_height() - 0.5};
}

void AcousticHeatmap::validate() const {
    grid.validate();
    if (values.size() != grid.cells()) throw InvalidArgument("heatmap: value count does not match grid");
    for (double v : values) {
        if (!std::isfinite(v)) throw InvalidArgument("heatmap: non-finite value");
        if (normalized && (v < 0.0 || v > 1.0)) throw InvalidArgument("heatmap: normalized value outside [0, 1]");
    }
}

AcousticHeatmap normalize_heatmap(AcousticHeatmap heatmap) {
    double peak = 0.0;
    for (double v : heatmap.values) peak = std::max(peak, std::abs(v));
    if (peak > 0.0) {
        for (double& v : heatmap.values) v = std::clamp(v / peak, 0.0, 1.0);
    }
    heatmap.normalized = true;
    return heatmap;
}

HeatmapPeak heatmap_peak(const AcousticHeatmap& heatmap) {
    if (heatmap.values.empty()) throw InvalidArgument("heatmap_peak: empty heatmap");
    std::size_t best = 0;
    for (std::size_t i = 1; i < heatmap.values.size(); ++i) {
        if (heatmap.values[i] > heatmap.values[best]) best = i;
    }
    HeatmapPeak peak;
    peak.index = best;
    peak.ix = best % heatmap.grid.nx;
    peak.iy = best / heatmap.grid.nx;
    peak.position = heatmap.grid.cell_center(peak.ix, peak.iy);
    return peak;
}

std::int64_t video_frame_at(double time) {
    return static_cast<std::int64_t>(std::floor(time * kVideoFrameRate + 1e-9));
}

}  // namespace sonoloc::beamform
