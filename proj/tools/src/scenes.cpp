#include "sonoloc_cli/scenes.hpp"

#include "sonoloc/sim/array.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sonoloc::cli {

namespace {

constexpr double kFaceDepth = 1.0;

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

sim::SyntheticScene default_scene(const localize::ActionProfile& profile, std::size_t clip_index, std::uint64_t seed,
                                  double duration, std::optional<double> snr_db) {
    std::mt19937_64 rng(sim::mix_seed(seed, 0xC11Full + clip_index));

    sim::SyntheticScene scene;
    scene.array = sim::make_ring_array(sim::kRingMics, sim::kRingRadius, sim::kArraySampleRate);
    scene.duration = duration;
    scene.snr_db = snr_db;
    scene.camera.pose = Rigid3::Identity();
    scene.camera.pose.translation() = Vec3(0.0, 0.05, 0.0);

    // Bone block: front face on the scan plane.
    const Vec3 half(0.12, 0.035, 0.04);
    const Vec3 block_center(uniform(rng, -0.12, 0.12), uniform(rng, -0.12, 0.06), kFaceDepth + half.z());
    sim::Box bone;
    bone.center = block_center;
    bone.half_extents = half;
    scene.primitives.push_back({bone, 1.2e5});

    sim::Box table;
    table.center = Vec3(0.0, 0.32, 1.15);
    table.half_extents = Vec3(0.45, 0.01, 0.3);
    scene.primitives.push_back({table, 1.0e5});
    scene.primitives.push_back({sim::Sphere{Vec3(block_center.x() > 0 ? -0.28 : 0.28, -0.2, 1.25), 0.09}, 1.0e5});

    sim::SourceSpec src;
    src.position = Vec3(block_center.x() + uniform(rng, -0.8, 0.8) * half.x(),
                        block_center.y() + uniform(rng, -0.6, 0.6) * half.y(), kFaceDepth);
    src.orientation = rotation_about_z(uniform(rng, -0.3, 0.3));

    if (profile.trigger_mode == localize::TriggerMode::impulsive) {
        src.waveform = sim::ImpulseTrain{0.5, 0.004, 1500.0, 10000.0};
        const auto count = static_cast<std::size_t>(std::max(1.0, std::floor((duration - 0.5) / 0.45)));
        const double spacing = (duration - 0.5) / static_cast<double>(count);
        for (std::size_t k = 0; k < count; ++k) {
            src.onsets.push_back(0.25 + static_cast<double>(k) * spacing + uniform(rng, 0.0, 0.3 * spacing));
        }
    } else {
        const double lo = profile.band ? profile.band->lo : 1000.0;
        const double hi = profile.band ? profile.band->hi : 5000.0;
        src.waveform = sim::BandLimitedNoise{lo, hi};
        const auto count = static_cast<std::size_t>(std::max(1.0, std::floor(duration / 1.0)));
        const double slot = (duration - 0.3) / static_cast<double>(count);
        for (std::size_t k = 0; k < count; ++k) {
            const double start = 0.25 + static_cast<double>(k) * slot + uniform(rng, 0.0, 0.1 * slot);
            const double len = std::min(uniform(rng, 0.4, 0.6) * slot, 0.5);
            src.active_intervals.push_back({start, std::min(start + len, duration)});
        }
    }
    scene.sources.push_back(src);
    scene.validate();
    return scene;
}

}  // namespace sonoloc::cli
