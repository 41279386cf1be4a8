#pragma once

#include "sonoloc/fusion/point_cloud.hpp"
#include "sonoloc/geometry.hpp"
#include "sonoloc/localize/dbscan.hpp"
#include "sonoloc/localize/profile.hpp"

#include <optional>

namespace sonoloc::localize {

struct BoxPrediction {
    std::optional<Aabb3> box;
    double cluster_weight = 0.0;
    std::size_t cluster_size = 0;
};

/// weighted_dbscan -> select_cluster -> tight_box -> clamp_extents.
BoxPrediction predict_box(const fusion::WeightedPointCloud& cloud, const ActionProfile& profile,
                          const ClusterParams& params, std::size_t jobs = 1);

struct LocalizationResult {
    double timestamp = 0.0;
    std::optional<Aabb3> predicted;
    OrientedBox3 ground_truth;
    double iou = 0.0;
    double cluster_weight = 0.0;
};

/// predict_box scored against `gt`; no cluster gives IoU 0.
LocalizationResult localize_event(const fusion::WeightedPointCloud& cloud, const ActionProfile& profile,
                                  const ClusterParams& params, const OrientedBox3& gt, double timestamp,
                                  std::size_t jobs = 1);

}  // namespace sonoloc::localize
