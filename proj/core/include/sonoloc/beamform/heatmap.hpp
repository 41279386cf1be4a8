#pragma once

#include "sonoloc/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sonoloc::beamform {

/// Planar scan grid perpendicular to the array's +z axis at `distance`
/// meters, centered on the axis. Cells are stored row-major (ny rows of nx);
/// x grows with the column index and y with the row index, matching the
/// camera convention (x right, y down).
struct ScanGrid {
    double distance = 1.0;
    double width = 0.8;
    double height = 0.8;
    std::size_t nx = 100;
    std::size_t ny = 100;

    void validate() const;
    std::size_t cells() const { return nx * ny; }
    double cell_width() const { return width / static_cast<double>(nx); }
    double cell_height() const { return height / static_cast<double>(ny); }
    /// Center of cell (ix, iy) in the array frame.
    Vec3 cell_center(std::size_t ix, std::size_t iy) const;
    Vec3 cell_center(std::size_t index) const { return cell_center(index % nx, index / nx); }
    /// Continuous cell coordinates of a point on the grid plane: cell centers
    /// sit at integer values.
    Eigen::Vector2d plane_to_cell(double x, double y) const;
};

struct TimeWindow {
    double start = 0.0;
    double end = 0.04;
    double length() const { return end - start; }
};

inline constexpr double kVideoFrameRate = 25.0;

/// Beamformed amplitudes over a scan grid for one analysis window.
struct AcousticHeatmap {
    ScanGrid grid;
    std::vector<double> values;  // ny * nx, row-major
    bool normalized = false;
    TimeWindow time_window;
    std::int64_t video_frame = 0;

    double at(std::size_t ix, std::size_t iy) const { return values[iy * grid.nx + ix]; }
    double& at(std::size_t ix, std::size_t iy) { return values[iy * grid.nx + ix]; }
    void validate() const;
};

/// Divides by the maximum; an all-zero map stays zero. Sets the flag.
AcousticHeatmap normalize_heatmap(AcousticHeatmap heatmap);

struct HeatmapPeak {
    std::size_t index = 0;
    std::size_t ix = 0;
    std::size_t iy = 0;
    Vec3 position = Vec3::Zero();  // cell center, array frame
};

/// Maximum cell; ties go to the lowest row-major index.
HeatmapPeak heatmap_peak(const AcousticHeatmap& heatmap);

/// floor(time * 25), the video frame containing `time`.
std::int64_t video_frame_at(double time);

}  // namespace sonoloc::beamform
