#include "sonoloc/localize/localize.hpp"

#include "sonoloc/localize/boxes.hpp"
#include "sonoloc/localize/iou.hpp"

namespace sonoloc::localize {

BoxPrediction predict_box(const fusion::WeightedPointCloud& cloud, const ActionProfile& profile,
                          const ClusterParams& params, std::size_t jobs) {
    cloud.validate();
    profile.validate();
    const std::vector<Cluster> clusters = weighted_dbscan(cloud.points, cloud.weights, params, jobs);
    BoxPrediction out;
    const auto pick = select_cluster(clusters);
    if (!pick) return out;
    const Cluster& c = clusters[*pick];
    const Aabb3 tight = tight_box(cloud.points, c.members);
    const Vec3 centroid = weighted_centroid(cloud.points, cloud.weights, c.members);
    out.box = clamp_extents(tight, profile, centroid);
    out.cluster_weight = c.total_weight;
    out.cluster_size = c.members.size();
    return out;
}

LocalizationResult localize_event(const fusion::WeightedPointCloud& cloud, const ActionProfile& profile,
                                  const ClusterParams& params, const OrientedBox3& gt, double timestamp,
                                  std::size_t jobs) {
    const BoxPrediction p = predict_box(cloud, profile, params, jobs);
    LocalizationResult r;
    r.timestamp = timestamp;
    r.predicted = p.box;
    r.ground_truth = gt;
    r.cluster_weight = p.cluster_weight;
    r.iou = p.box ? iou3d(*p.box, gt) : 0.0;
    return r;
}

}  // namespace sonoloc::localize
