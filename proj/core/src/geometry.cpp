#include "sonoloc/geometry.hpp"

#include "sonoloc/errors.hpp"

#include <cmath>

namespace sonoloc {

Rigid3 rigid_from_row_major(std::span<const double> values) {
    if (values.size() != 16) {
        throw InvalidArgument("rigid transform needs 16 values, got " + std::to_string(values.size()));
    }
    Eigen::Matrix4d m;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            m(r, c) = values[static_cast<std::size_t>(r * 4 + c)];
        }
    }
    if (!is_rigid(m, 1e-6)) {
        throw InvalidArgument("matrix is not a rigid transform");
    }
    Rigid3 t = Rigid3::Identity();
    t.matrix() = m;
    return t;
}

std::array<double, 16> rigid_to_row_major(const Rigid3& t) {
    std::array<double, 16> out{};
    const Eigen::Matrix4d& m = t.matrix();
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            out[static_cast<std::size_t>(r * 4 + c)] = m(r, c);
        }
    }
    return out;
}

bool is_rotation(const Mat3& r, double tol) {
    if (!r.allFinite()) return false;
    const Mat3 should_be_identity = r.transpose() * r;
    return (should_be_identity - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol &&
           std::abs(r.determinant() - 1.0) <= tol;
}

bool is_rigid(const Eigen::Matrix4d& m, double tol) {
    if (!m.allFinite()) return false;
    if (std::abs(m(3, 0)) > tol || std::abs(m(3, 1)) > tol || std::abs(m(3, 2)) > tol ||
        std::abs(m(3, 3) - 1.0) > tol) {
        return false;
    }
    return is_rotation(m.topLeftCorner<3, 3>(), tol);
}

Mat3 rotation_about_z(double radians) {
    return Eigen::AngleAxisd(radians, Vec3::UnitZ()).toRotationMatrix();
}

Aabb3 OrientedBox3::bounds() const {
    const Vec3 reach = rotation.cwiseAbs() * half_extents;
    return {center - reach, center + reach};
}

bool OrientedBox3::axis_aligned(double tol) const {
    // Signed permutation matrices keep faces parallel to the world axes.
    for (int r = 0; r < 3; ++r) {
        int big = 0;
        for (int c = 0; c < 3; ++c) {
            const double a = std::abs(rotation(r, c));
            if (std::abs(a - 1.0) <= tol) {
                ++big;
            } else if (a > tol) {
                return false;
            }
        }
        if (big != 1) return false;
    }
    return true;
}

bool OrientedBox3::valid() const {
    return center.allFinite() && (half_extents.array() > 0.0).all() && is_rotation(rotation, 1e-6);
}

}  // namespace sonoloc
