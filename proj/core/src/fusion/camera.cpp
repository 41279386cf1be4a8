#include "sonoloc/fusion/camera.hpp"

#include "sonoloc/errors.hpp"

#include <cmath>

namespace sonoloc::fusion {

void CameraModel::validate() const {
    if (!(fx > 0.0) || !(fy > 0.0) || !std::isfinite(cx) || !std::isfinite(cy)) {
        throw InvalidArgument("camera: focal lengths must be positive and principal point finite");
    }
    if (width <= 0 || height <= 0) throw InvalidArgument("camera: resolution must be positive");
    if (!is_rigid(pose.matrix(), 1e-6)) throw InvalidArgument("camera: pose is not a rigid transform");
}

std::optional<Projection> project_camera_point(const Vec3& q, const CameraModel& camera) {
    if (!(q.z() > 0.0)) return std::nullopt;
    return Projection{{camera.fx * q.x() / q.z() + camera.cx, camera.fy * q.y() / q.z() + camera.cy}, q.z()};
}

std::optional<Projection> project_point(const Vec3& p, const CameraModel& camera) {
    return project_camera_point(camera.pose * p, camera);
}

}  // namespace sonoloc::fusion
