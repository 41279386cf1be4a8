#include "sonoloc/localize/boxes.hpp"

#include "sonoloc/errors.hpp"

namespace sonoloc::localize {

Aabb3 tight_box(std::span<const Vec3> points) {
    if (points.empty()) throw EmptyCluster("cannot bound an empty cluster");
    Aabb3 box{points[0], points[0]};
    for (const Vec3& p : points) {
        box.min = box.min.cwiseMin(p);
        box.max = box.max.cwiseMax(p);
    }
    return box;
}

Aabb3 tight_box(std::span<const Vec3> points, std::span<const std::size_t> members) {
    if (members.empty()) throw EmptyCluster("cannot bound an empty cluster");
    Aabb3 box{points[members[0]], points[members[0]]};
    for (std::size_t i : members) {
        box.min = box.min.cwiseMin(points[i]);
        box.max = box.max.cwiseMax(points[i]);
    }
    return box;
}

Vec3 weighted_centroid(std::span<const Vec3> points, std::span<const double> weights,
                       std::span<const std::size_t> members) {
    if (members.empty()) throw EmptyCluster("cluster has no members");
    Vec3 acc = Vec3::Zero();
    double total = 0.0;
    for (std::size_t i : members) {
        acc += weights[i] * points[i];
        total += weights[i];
    }
    if (total > 0.0) return acc / total;
    acc.setZero();
    for (std::size_t i : members) acc += points[i];
    return acc / static_cast<double>(members.size());
}

Aabb3 clamp_extents(const Aabb3& box, const ActionProfile& profile, const Vec3& centroid) {
    if (!box.valid()) throw InvalidArgument("box min must not exceed max");
    if (const auto* cube = std::get_if<FixedCube>(&profile.box_rule)) {
        const Vec3 half = Vec3::Constant(0.5 * cube->edge);
        return {centroid - half, centroid + half};
    }
    const Vec3& limit = std::get<InstrumentExtents>(profile.box_rule).extents;
    const Vec3 center = box.center();
    Aabb3 out = box;
    for (int a = 0; a < 3; ++a) {
        if (box.max[a] - box.min[a] > limit[a]) {
            out.min[a] = center[a] - 0.5 * limit[a];
            out.max[a] = center[a] + 0.5 * limit[a];
        }
    }
    return out;
}

}  // namespace sonoloc::localize
