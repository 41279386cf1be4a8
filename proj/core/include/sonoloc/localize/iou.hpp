#pragma once

#include "sonoloc/geometry.hpp"

#include <span>
#include <vector>

namespace sonoloc::localize {

double intersection_volume(const Aabb3& a, const Aabb3& b);
double iou_aabb(const Aabb3& a, const Aabb3& b);

/// Intersection volume of an axis-aligned and an oriented box by midpoint
/// sampling on a samples_per_axis^3 lattice. The lattice covers the overlap
/// of `a` with the oriented box's bounds, which contains the whole
/// intersection.
double sampled_intersection_volume(const Aabb3& a, const OrientedBox3& b, std::size_t samples_per_axis = 100);

/// Exact when `gt` is axis-aligned (any signed axis permutation), otherwise
/// sampled with samples_per_axis^3 points. 0 when the boxes do not overlap.
double iou3d(const Aabb3& pred, const OrientedBox3& gt, std::size_t samples_per_axis = 100);

/// Forces the sampled path regardless of gt orientation.
double iou3d_sampled(const Aabb3& pred, const OrientedBox3& gt, std::size_t samples_per_axis = 100);

struct RecallTable {
    std::vector<double> thresholds;
    std::vector<double> recall;
    bool undefined = false;  // no IoU values; recall reported as 0
};

/// Fraction of IoU values >= each threshold.
RecallTable recall_table(std::span<const double> ious, std::span<const double> thresholds);

struct Histogram {
    double bin_width = 0.05;
    std::vector<double> edges;  // bins.size() + 1 values over [0, 1]
    std::vector<std::size_t> counts;
};

/// Bins [k w, (k+1) w); IoU 1.0 falls in the last bin.
Histogram iou_histogram(std::span<const double> ious, double bin_width = 0.05);

}  // namespace sonoloc::localize
