#pragma once

#include "sonoloc/fusion/point_cloud.hpp"
#include "sonoloc/sim/scene.hpp"

#include <cstdint>

namespace sonoloc::sim {

/// Samples round(density * area) points uniformly on each sphere and box face,
/// then keeps those visible from the scene camera: front-facing with respect
/// to the optical center and at positive depth. No occlusion between
/// primitives is modeled.
fusion::PointCloud synth_point_cloud(const SyntheticScene& scene, std::uint64_t seed);

/// Area of the faces of `box` that face the camera center (analytic; used to
/// size expectations).
double visible_box_area(const Box& box, const Vec3& camera_center);

}  // namespace sonoloc::sim
