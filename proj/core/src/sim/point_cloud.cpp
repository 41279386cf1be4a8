#include "sonoloc/sim/point_cloud.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace sonoloc::sim {
namespace {

struct Face {
    Vec3 center;
    Vec3 normal;
    Vec3 axis_u;  // half-extent vectors spanning the face
    Vec3 axis_v;
    double area;
};

std::vector<Face> box_faces(const Box& box) {
    std::vector<Face> faces;
    for (int axis = 0; axis < 3; ++axis) {
        const int u = (axis + 1) % 3;
        const int v = (axis + 2) % 3;
        for (double sign : {1.0, -1.0}) {
            Face f;
            f.normal = sign * box.rotation.col(axis);
            f.center = box.center + box.half_extents[axis] * f.normal;
            f.axis_u = box.half_extents[u] * box.rotation.col(u);
            f.axis_v = box.half_extents[v] * box.rotation.col(v);
            f.area = 4.0 * box.half_extents[u] * box.half_extents[v];
            faces.push_back(f);
        }
    }
    return faces;
}

bool faces_camera(const Vec3& normal, const Vec3& point, const Vec3& camera_center) {
    return normal.dot(camera_center - point) > 0.0;
}

}  // namespace

double visible_box_area(const Box& box, const Vec3& camera_center) {
    double area = 0.0;
    for (const Face& f : box_faces(box)) {
        if (faces_camera(f.normal, f.center, camera_center)) area += f.area;
    }
    return area;
}

fusion::PointCloud synth_point_cloud(const SyntheticScene& scene, std::uint64_t seed) {
    const Vec3 eye = scene.camera.center_world();
    fusion::PointCloud cloud;

    auto keep = [&](const Vec3& p) { return (scene.camera.pose * p).z() > 0.0; };

    for (std::size_t i = 0; i < scene.primitives.size(); ++i) {
        const ScenePrimitive& prim = scene.primitives[i];
        std::mt19937_64 rng(mix_seed(seed, 7000 + i));
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        std::normal_distribution<double> gauss(0.0, 1.0);

        if (const auto* sphere = std::get_if<Sphere>(&prim.shape)) {
            const double area = 4.0 * std::numbers::pi * sphere->radius * sphere->radius;
            const auto count = static_cast<std::size_t>(std::llround(prim.density * area));
            for (std::size_t k = 0; k < count; ++k) {
                Vec3 dir(gauss(rng), gauss(rng), gauss(rng));
                const double len = dir.norm();
                if (len == 0.0) continue;
                dir /= len;
                const Vec3 p = sphere->center + sphere->radius * dir;
                if (faces_camera(dir, p, eye) && keep(p)) cloud.points.push_back(p);
            }
        } else {
            const Box& box = std::get<Box>(prim.shape);
            for (const Face& f : box_faces(box)) {
                const auto count = static_cast<std::size_t>(std::llround(prim.density * f.area));
                const bool front = faces_camera(f.normal, f.center, eye);
                for (std::size_t k = 0; k < count; ++k) {
                    // Draw even for hidden faces so each face's stream is independent of visibility.
                    const double a = unit(rng);
                    const double b = unit(rng);
                    if (!front) continue;
                    const Vec3 p = f.center + a * f.axis_u + b * f.axis_v;
                    if (keep(p)) cloud.points.push_back(p);
                }
            }
        }
    }
    return cloud;
}

}  // namespace sonoloc::sim
