#pragma once

#include "sonoloc/geometry.hpp"

#include <optional>

namespace sonoloc::fusion {

/// Rectified pinhole camera. `pose` maps world coordinates into the camera
/// frame (x right, y down, z forward).
struct CameraModel {
    double fx = 1400.0;
    double fy = 1400.0;
    double cx = 960.0;
    double cy = 540.0;
    int width = 1920;
    int height = 1080;
    Rigid3 pose = Rigid3::Identity();

    void validate() const;
    /// Optical center in world coordinates.
    Vec3 center_world() const { return pose.inverse().translation(); }
};

struct Projection {
    Eigen::Vector2d pixel;
    double depth = 0.0;
};

/// Pinhole projection; std::nullopt when the point is at or behind the image
/// plane (camera-frame z <= 0).
std::optional<Projection> project_point(const Vec3& world_point, const CameraModel& camera);

/// Same projection for a point already expressed in the camera frame.
std::optional<Projection> project_camera_point(const Vec3& camera_point, const CameraModel& camera);

}  // namespace sonoloc::fusion
