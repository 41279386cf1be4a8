#include "sonoloc/localize/iou.hpp"

#include "sonoloc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace sonoloc::localize {

namespace {

double iou_from(double inter, double va, double vb) {
    const double uni = va + vb - inter;
    if (!(uni > 0.0)) return 0.0;
    return std::clamp(inter / uni, 0.0, 1.0);
}

void check(const Aabb3& a, const OrientedBox3& b) {
    if (!a.valid()) throw InvalidArgument("predicted box min must not exceed max");
    if (!b.valid()) throw InvalidArgument("ground-truth box must have positive extents and a rotation");
}

}  // namespace

double intersection_volume(const Aabb3& a, const Aabb3& b) {
    const Vec3 lo = a.min.cwiseMax(b.min);
    const Vec3 hi = a.max.cwiseMin(b.max);
    const Vec3 e = (hi - lo).cwiseMax(0.0);
    return e.x() * e.y() * e.z();
}

double iou_aabb(const Aabb3& a, const Aabb3& b) {
    return iou_from(intersection_volume(a, b), a.volume(), b.volume());
}

double sampled_intersection_volume(const Aabb3& a, const OrientedBox3& b, std::size_t samples_per_axis) {
    if (samples_per_axis == 0) throw InvalidArgument("samples per axis must be positive");
    const Aabb3 bb = b.bounds();
    const Vec3 lo = a.min.cwiseMax(bb.min);
    const Vec3 hi = a.max.cwiseMin(bb.max);
    if ((hi.array() <= lo.array()).any()) return 0.0;
    const Vec3 step = (hi - lo) / static_cast<double>(samples_per_axis);
    const Mat3 rt = b.rotation.transpose();
    std::size_t inside = 0;
    for (std::size_t i = 0; i < samples_per_axis; ++i) {
        const double x = lo.x() + (static_cast<double>(i) + 0.5) * step.x();
        for (std::size_t j = 0; j < samples_per_axis; ++j) {
            const double y = lo.y() + (static_cast<double>(j) + 0.5) * step.y();
            for (std::size_t k = 0; k < samples_per_axis; ++k) {
                const double z = lo.z() + (static_cast<double>(k) + 0.5) * step.z();
                // Lattice points already lie inside `a`, so only the oriented box needs testing.
                const Vec3 local = rt * (Vec3(x, y, z) - b.center);
                if ((local.cwiseAbs().array() <= b.half_extents.array()).all()) ++inside;
            }
        }
    }
    const double n = static_cast<double>(samples_per_axis);
    return static_cast<double>(inside) / (n * n * n) * (hi - lo).prod();
}

double iou3d_sampled(const Aabb3& pred, const OrientedBox3& gt, std::size_t samples_per_axis) {
    check(pred, gt);
    return iou_from(sampled_intersection_volume(pred, gt, samples_per_axis), pred.volume(), gt.volume());
}

double iou3d(const Aabb3& pred, const OrientedBox3& gt, std::size_t samples_per_axis) {
    check(pred, gt);
    if (gt.axis_aligned()) return iou_aabb(pred, gt.bounds());
    return iou3d_sampled(pred, gt, samples_per_axis);
}

RecallTable recall_table(std::span<const double> ious, std::span<const double> thresholds) {
    RecallTable t;
    t.thresholds.assign(thresholds.begin(), thresholds.end());
    t.recall.assign(thresholds.size(), 0.0);
    for (double v : ious) {
        if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("IoU values must lie in [0, 1]");
    }
    if (ious.empty()) {
        t.undefined = true;
        return t;
    }
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        const auto hits = std::count_if(ious.begin(), ious.end(), [&](double v) { return v >= thresholds[i]; });
        t.recall[i] = static_cast<double>(hits) / static_cast<double>(ious.size());
    }
    return t;
}

Histogram iou_histogram(std::span<const double> ious, double bin_width) {
    if (!(bin_width > 0.0 && bin_width <= 1.0)) throw InvalidArgument("histogram bin width must lie in (0, 1]");
    Histogram h;
    h.bin_width = bin_width;
    const auto bins = static_cast<std::size_t>(std::ceil(1.0 / bin_width - 1e-9));
    h.counts.assign(bins, 0);
    for (std::size_t k = 0; k <= bins; ++k) h.edges.push_back(std::min(1.0, static_cast<double>(k) * bin_width));
    for (double v : ious) {
        if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("IoU values must lie in [0, 1]");
        auto k = static_cast<std::size_t>(std::floor(v / bin_width + 1e-9));
        h.counts[std::min(k, bins - 1)]++;
    }
    return h;
}

}  // namespace sonoloc::localize
