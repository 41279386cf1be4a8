#pragma once

#include "sonoloc/fusion/camera.hpp"
#include "sonoloc/geometry.hpp"
#include "sonoloc/localize/profile.hpp"
#include "sonoloc/sim/array.hpp"
#include "sonoloc/sim/waveform.hpp"

#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace sonoloc::sim {

struct Interval {
    double start = 0.0;
    double end = 0.0;
};

/// A static sound source. Impulse-train sources emit one click per onset;
/// other waveforms play inside `active_intervals` (the whole clip when empty).
struct SourceSpec {
    Vec3 position = Vec3::Zero();  // world frame
    WaveformKind waveform = ImpulseTrain{};
    std::vector<double> onsets;
    double amplitude = 1.0;
    std::vector<Interval> active_intervals;
    Mat3 orientation = Mat3::Identity();  // instrument pose for ground-truth boxes

    void validate(double duration) const;
};

struct Sphere {
    Vec3 center = Vec3::Zero();
    double radius = 0.1;
};

struct Box {
    Vec3 center = Vec3::Zero();
    Vec3 half_extents = Vec3::Constant(0.1);
    Mat3 rotation = Mat3::Identity();
};

struct ScenePrimitive {
    std::variant<Sphere, Box> shape = Sphere{};
    double density = 1.0e5;  // surface points per square meter

    void validate() const;
};

struct SyntheticScene {
    MicArray array;
    Rigid3 array_pose = Rigid3::Identity();  // array frame -> world
    std::vector<SourceSpec> sources;
    std::vector<ScenePrimitive> primitives;
    fusion::CameraModel camera;  // RGB-D camera used for the point cloud
    fusion::CameraModel acoustic_intrinsics;  // pose ignored; see acoustic_camera()
    std::optional<double> snr_db = 20.0;      // nullopt disables sensor noise
    double duration = 2.0;
    double speed_of_sound = 343.0;

    void validate() const;
    Vec3 mic_world(std::size_t m) const { return array_pose * array.positions[m]; }
};

/// The camera co-located with the array: its frame is the array frame, so the
/// beamformer's scan grid lives in camera coordinates.
fusion::CameraModel acoustic_camera(const SyntheticScene& scene);

/// Source signal before propagation, amplitude not applied.
std::vector<double> render_source(const SourceSpec& source, double duration, double sample_rate, std::uint64_t seed);

/// Event start times for a source: its onsets, or the interval starts for
/// continuous sources without explicit onsets.
std::vector<double> source_event_times(const SourceSpec& source, double duration);

/// Time spans during which a source counts as "event present".
/// Clicks span [onset, onset + 3 * decay]; continuous sources span their intervals.
std::vector<Interval> source_event_spans(const SourceSpec& source, double duration);

/// Propagation delay in seconds from the source to the array origin.
double arrival_delay(const SyntheticScene& scene, const SourceSpec& source);

/// Ground-truth box for an event of `source` under `profile`: a cube of the
/// profile's edge for fixed-cube rules, else the instrument extents rotated
/// by the source orientation. Both are centered on the source.
OrientedBox3 ground_truth_box(const SourceSpec& source, const localize::ActionProfile& profile);

}  // namespace sonoloc::sim
