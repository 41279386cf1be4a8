#pragma once

#include "sonoloc/beamform/heatmap.hpp"
#include "sonoloc/fusion/camera.hpp"
#include "sonoloc/fusion/point_cloud.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace sonoloc::fusion {

/// Projection of every heatmap cell center into the acoustic camera.
/// The scan grid is expressed in the acoustic camera frame.
struct HeatmapPixelMap {
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<Eigen::Vector2d> pixels;  // row-major like the heatmap
    std::vector<bool> visible;

    const Eigen::Vector2d& pixel(std::size_t ix, std::size_t iy) const { return pixels[iy * nx + ix]; }
    /// Index of the visible cell whose pixel is nearest to `pixel` (lowest index on ties).
    std::optional<std::size_t> nearest_cell(const Eigen::Vector2d& pixel) const;
};

HeatmapPixelMap heatmap_pixel_map(const beamform::AcousticHeatmap& heatmap, const CameraModel& acoustic_camera);

/// Pixel-domain calibration error: each fusion call shifts every projected
/// pixel by one offset whose length is drawn from N(mean, std) (clamped at 0)
/// in a uniformly random direction.
struct CalibrationNoise {
    double mean_px = 0.0;
    double std_px = 0.0;
    std::uint64_t seed = 0;
};

/// Reprojection statistics for the acoustic camera and the RGB-D camera at 1920x1080.
inline constexpr CalibrationNoise kAcousticCameraNoise{2.30, 2.12, 0};
inline constexpr CalibrationNoise kDepthCameraNoise{1.52, 0.84, 0};

/// Pixel offset a CalibrationNoise draws for its seed.
Eigen::Vector2d calibration_offset(const CalibrationNoise& noise);

/// Weights every point by the bilinearly interpolated heatmap value at the
/// grid position its acoustic-camera pixel maps to. Points behind the camera
/// or outside the grid extent get weight 0. Cells beyond the outermost
/// centers take the edge value.
///
/// Throws NotNormalized unless the heatmap's normalized flag is set.
WeightedPointCloud fuse(const PointCloud& cloud, const beamform::AcousticHeatmap& heatmap,
                        const CameraModel& acoustic_camera, const std::optional<CalibrationNoise>& noise = std::nullopt);

}  // namespace sonoloc::fusion
