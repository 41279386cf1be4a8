#pragma once

#include "sonoloc/geometry.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace sonoloc::fusion {

struct PointCloud {
    std::vector<Vec3> points;
    std::vector<std::array<std::uint8_t, 3>> colors;  // empty or one per point

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    void validate() const;
};

/// Points with per-point acoustic weight in [0, 1] for one video frame.
struct WeightedPointCloud {
    std::vector<Vec3> points;
    std::vector<double> weights;
    std::int64_t source_frame = 0;

    std::size_t size() const { return points.size(); }
    void validate() const;
};

}  // namespace sonoloc::fusion
