#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <span>

namespace sonoloc {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Rigid3 = Eigen::Isometry3d;

/// Builds a rigid transform from 16 row-major values of a homogeneous 4x4 matrix.
Rigid3 rigid_from_row_major(std::span<const double> values);
std::array<double, 16> rigid_to_row_major(const Rigid3& t);

/// True when the linear part is orthonormal with determinant +1 and the last
/// row is (0, 0, 0, 1).
bool is_rigid(const Eigen::Matrix4d& m, double tol = 1e-9);
bool is_rotation(const Mat3& r, double tol = 1e-9);

Mat3 rotation_about_z(double radians);

/// Axis-aligned box; a single point is a valid zero-volume box.
struct Aabb3 {
    Vec3 min = Vec3::Zero();
    Vec3 max = Vec3::Zero();

    Vec3 center() const { return 0.5 * (min + max); }
    Vec3 extents() const { return max - min; }
    double volume() const {
        const Vec3 e = extents();
        return e.x() * e.y() * e.z();
    }
    bool contains(const Vec3& p, double tol = 0.0) const {
        return (p.array() >= min.array() - tol).all() && (p.array() <= max.array() + tol).all();
    }
    bool valid() const { return (min.array() <= max.array()).all() && min.allFinite() && max.allFinite(); }
};

struct OrientedBox3 {
    Vec3 center = Vec3::Zero();
    Vec3 half_extents = Vec3::Ones();
    Mat3 rotation = Mat3::Identity();

    double volume() const { return 8.0 * half_extents.prod(); }
    bool contains(const Vec3& p) const {
        const Vec3 local = rotation.transpose() * (p - center);
        return (local.cwiseAbs().array() <= half_extents.array()).all();
    }
    /// Smallest axis-aligned box enclosing this one.
    Aabb3 bounds() const;
    bool axis_aligned(double tol = 1e-12) const;
    bool valid() const;
};

}  // namespace sonoloc
