#pragma once

#include "sonoloc/geometry.hpp"
#include "sonoloc/localize/profile.hpp"

#include <span>

namespace sonoloc::localize {

/// Component-wise min/max of the points; throws EmptyCluster when empty.
Aabb3 tight_box(std::span<const Vec3> points);
Aabb3 tight_box(std::span<const Vec3> points, std::span<const std::size_t> members);

/// Weight-weighted mean position; falls back to the plain mean when all
/// weights are zero. Throws EmptyCluster when empty.
Vec3 weighted_centroid(std::span<const Vec3> points, std::span<const double> weights,
                       std::span<const std::size_t> members);

/// Instrument rule: shrink each extent above the limit to the limit about the
/// box center. Fixed-cube rule: a cube of the profile's edge centered on
/// `centroid`.
Aabb3 clamp_extents(const Aabb3& box, const ActionProfile& profile, const Vec3& centroid);

}  // namespace sonoloc::localize
