#include "sonoloc/fusion/fuse.hpp"

#include "sonoloc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace sonoloc::fusion {

std::optional<std::size_t> HeatmapPixelMap::nearest_cell(const Eigen::Vector2d& pixel) const {
    std::optional<std::size_t> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        if (!visible[i]) continue;
        const double d = (pixels[i] - pixel).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

HeatmapPixelMap heatmap_pixel_map(const beamform::AcousticHeatmap& heatmap, const CameraModel& acoustic_camera) {
    const beamform::ScanGrid& grid = heatmap.grid;
    grid.validate();
    HeatmapPixelMap map;
    map.nx = grid.nx;
    map.ny = grid.ny;
    map.pixels.resize(grid.cells(), Eigen::Vector2d::Zero());
    map.visible.resize(grid.cells(), false);
    for (std::size_t c = 0; c < grid.cells(); ++c) {
        if (const auto proj = project_camera_point(grid.cell_center(c), acoustic_camera)) {
            map.pixels[c] = proj->pixel;
            map.visible[c] = true;
        }
    }
    return map;
}

Eigen::Vector2d calibration_offset(const CalibrationNoise& noise) {
    if (noise.mean_px == 0.0 && noise.std_px == 0.0) return Eigen::Vector2d::Zero();
    std::mt19937_64 rng(noise.seed);
    std::normal_distribution<double> length(noise.mean_px, noise.std_px);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const double r = std::max(0.0, length(rng));
    const double a = angle(rng);
    return {r * std::cos(a), r * std::sin(a)};
}

WeightedPointCloud fuse(const PointCloud& cloud, const beamform::AcousticHeatmap& heatmap,
                        const CameraModel& acoustic_camera, const std::optional<CalibrationNoise>& noise) {
    if (!heatmap.normalized) throw NotNormalized("fuse: heatmap must be normalized to [0, 1] first");
    const beamform::ScanGrid& grid = heatmap.grid;
    grid.validate();
    if (heatmap.values.size() != grid.cells()) throw DimensionMismatch("fuse: heatmap values do not match grid");

    const Eigen::Vector2d offset = noise ? calibration_offset(*noise) : Eigen::Vector2d::Zero();
    const double max_x = static_cast<double>(grid.nx - 1);
    const double max_y = static_cast<double>(grid.ny - 1);

    WeightedPointCloud out;
    out.points = cloud.points;
    out.weights.assign(cloud.points.size(), 0.0);
    out.source_frame = heatmap.video_frame;

    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        const auto proj = project_point(cloud.points[i], acoustic_camera);
        if (!proj) continue;
        const Eigen::Vector2d px = proj->pixel + offset;
        // Back onto the scan plane through the pixel's ray.
        const double x = (px.x() - acoustic_camera.cx) / acoustic_camera.fx * grid.distance;
        const double y = (px.y() - acoustic_camera.cy) / acoustic_camera.fy * grid.distance;
        const Eigen::Vector2d g = grid.plane_to_cell(x, y);
        if (g.x() < -0.5 || g.x() > max_x + 0.5 || g.y() < -0.5 || g.y() > max_y + 0.5) continue;

        const double gx = std::clamp(g.x(), 0.0, max_x);
        const double gy = std::clamp(g.y(), 0.0, max_y);
        const auto x0 = static_cast<std::size_t>(std::floor(gx));
        const auto y0 = static_cast<std::size_t>(std::floor(gy));
        const std::size_t x1 = std::min(x0 + 1, grid.nx - 1);
        const std::size_t y1 = std::min(y0 + 1, grid.ny - 1);
        const double tx = gx - static_cast<double>(x0);
        const double ty = gy - static_cast<double>(y0);
        const double top = (1.0 - tx) * heatmap.at(x0, y0) + tx * heatmap.at(x1, y0);
        const double bottom = (1.0 - tx) * heatmap.at(x0, y1) + tx * heatmap.at(x1, y1);
        out.weights[i] = std::clamp((1.0 - ty) * top + ty * bottom, 0.0, 1.0);
    }
    return out;
}

}  // namespace sonoloc::fusion
