#include "sonoloc/sim/scene.hpp"

#include "sonoloc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace sonoloc::sim {

void SourceSpec::validate(double duration) const {
    if (!position.allFinite()) throw InvalidArgument("source: position is not finite");
    if (!(amplitude > 0.0)) throw InvalidArgument("source: amplitude must be positive");
    for (std::size_t i = 1; i < onsets.size(); ++i) {
        if (!(onsets[i] > onsets[i - 1])) throw InvalidArgument("source: onsets must be strictly increasing");
    }
    for (double t : onsets) {
        if (!(t >= 0.0) || !(t < duration)) throw InvalidArgument("source: onset outside the clip");
    }
    for (std::size_t i = 0; i < active_intervals.size(); ++i) {
        const Interval& iv = active_intervals[i];
        if (!(iv.start >= 0.0) || !(iv.end > iv.start) || iv.end > duration + 1e-9) {
            throw InvalidArgument("source: active interval must satisfy 0 <= start < end <= duration");
        }
        if (i > 0 && iv.start < active_intervals[i - 1].end) {
            throw InvalidArgument("source: active intervals overlap or are unsorted");
        }
    }
    if (!is_rotation(orientation, 1e-6)) throw InvalidArgument("source: orientation is not a rotation");
}

void ScenePrimitive::validate() const {
    if (!(density > 0.0)) throw InvalidArgument("primitive: density must be positive");
    if (const auto* s = std::get_if<Sphere>(&shape)) {
        if (!(s->radius > 0.0)) throw InvalidArgument("primitive: sphere radius must be positive");
    } else {
        const Box& b = std::get<Box>(shape);
        if (!(b.half_extents.array() > 0.0).all()) throw InvalidArgument("primitive: box extents must be positive");
        if (!is_rotation(b.rotation, 1e-6)) throw InvalidArgument("primitive: box rotation is not a rotation");
    }
}

void SyntheticScene::validate() const {
    array.validate();
    if (!(duration > 0.0)) throw InvalidArgument("scene: duration must be positive");
    if (!(speed_of_sound > 0.0)) throw InvalidArgument("scene: speed of sound must be positive");
    if (!is_rigid(array_pose.matrix(), 1e-6)) throw InvalidArgument("scene: array pose is not rigid");
    if (snr_db && !std::isfinite(*snr_db)) throw InvalidArgument("scene: snr_db must be finite");
    for (const SourceSpec& s : sources) {
        s.validate(duration);
        validate_waveform(s.waveform, array.sample_rate);
    }
    for (const ScenePrimitive& p : primitives) p.validate();
    camera.validate();
    acoustic_intrinsics.validate();
}

fusion::CameraModel acoustic_camera(const SyntheticScene& scene) {
    fusion::CameraModel cam = scene.acoustic_intrinsics;
    cam.pose = scene.array_pose.inverse();
    return cam;
}

std::vector<double> render_source(const SourceSpec& source, double duration, double sample_rate, std::uint64_t seed) {
    if (const auto* train = std::get_if<ImpulseTrain>(&source.waveform)) {
        if (!source.onsets.empty()) return render_clicks(*train, source.onsets, duration, sample_rate, seed);
        return synth_waveform(*train, duration, sample_rate, seed);
    }
    std::vector<double> x = synth_waveform(source.waveform, duration, sample_rate, seed);
    if (!source.active_intervals.empty()) {
        std::vector<double> gated(x.size(), 0.0);
        for (const Interval& iv : source.active_intervals) {
            const auto a = static_cast<std::size_t>(std::llround(iv.start * sample_rate));
            const auto b = std::min(x.size(), static_cast<std::size_t>(std::llround(iv.end * sample_rate)));
            for (std::size_t i = a; i < b; ++i) gated[i] = x[i];
        }
        x = std::move(gated);
    }
    return x;
}

std::vector<double> source_event_times(const SourceSpec& source, double duration) {
    if (!source.onsets.empty()) return source.onsets;
    if (const auto* train = std::get_if<ImpulseTrain>(&source.waveform)) return impulse_onsets(*train, duration);
    std::vector<double> times;
    if (source.active_intervals.empty()) {
        times.push_back(0.0);
    } else {
        for (const Interval& iv : source.active_intervals) times.push_back(iv.start);
    }
    return times;
}

std::vector<Interval> source_event_spans(const SourceSpec& source, double duration) {
    std::vector<Interval> spans;
    if (const auto* train = std::get_if<ImpulseTrain>(&source.waveform)) {
        const std::vector<double> onsets = source.onsets.empty() ? impulse_onsets(*train, duration) : source.onsets;
        for (double t : onsets) spans.push_back({t, std::min(duration, t + 3.0 * train->decay)});
        return spans;
    }
    if (source.active_intervals.empty()) return {{0.0, duration}};
    return source.active_intervals;
}

double arrival_delay(const SyntheticScene& scene, const SourceSpec& source) {
    return (source.position - scene.array_pose.translation()).norm() / scene.speed_of_sound;
}

OrientedBox3 ground_truth_box(const SourceSpec& source, const localize::ActionProfile& profile) {
    OrientedBox3 box;
    box.center = source.position;
    if (const auto* cube = std::get_if<localize::FixedCube>(&profile.box_rule)) {
        box.half_extents = Vec3::Constant(cube->edge / 2.0);
        box.rotation = Mat3::Identity();
    } else {
        const auto& inst = std::get<localize::InstrumentExtents>(profile.box_rule);
        box.half_extents = inst.extents / 2.0;
        box.rotation = source.orientation;
    }
    return box;
}

}  // namespace sonoloc::sim
