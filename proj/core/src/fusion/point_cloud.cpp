#include "sonoloc/fusion/point_cloud.hpp"

#include "sonoloc/errors.hpp"

namespace sonoloc::fusion {

void PointCloud::validate() const {
    for (const Vec3& p : points) {
        if (!p.allFinite()) throw InvalidArgument("point cloud: non-finite coordinate");
    }
    if (!colors.empty() && colors.size() != points.size()) throw InvalidArgument("point cloud: color count mismatch");
}

void WeightedPointCloud::validate() const {
    if (weights.size() != points.size()) throw InvalidArgument("weighted cloud: weight count mismatch");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!points[i].allFinite()) throw InvalidArgument("weighted cloud: non-finite coordinate");
        if (!(weights[i] >= 0.0 && weights[i] <= 1.0)) throw InvalidArgument("weighted cloud: weight outside [0, 1]");
    }
}

}  // namespace sonoloc::fusion
