#pragma once

#include "sonoloc/dsp/mel.hpp"
#include "sonoloc/sim/scene.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace sonoloc::detect {

/// One pooled log-mel vector per hop frame.
///
/// Frame k analyses the window [k*hop, k*hop + window) of the input. Its
/// event-presence label is 1 when an event span intersects the window minus
/// a guard of kLabelGuard * window at each edge, where the Hann taper leaves
/// too little energy to tell an event apart from noise. The timestamp of frame k is origin_time + k*hop, the start
/// of the hop slot in which an onset first turns the label on, so an onset
/// at t belongs to frame floor((t - origin_time) / hop).
struct FeatureSequence {
    std::size_t n_frames = 0;
    std::size_t dim = 0;
    std::vector<double> values;  // n_frames * dim
    double hop_len = 0.0;
    double origin_time = 0.0;

    std::span<const double> frame(std::size_t i) const { return {values.data() + i * dim, dim}; }
};

inline constexpr double kLabelGuard = 0.03;

/// Timestamp of hop frame 0 relative to the signal start: (1 - guard) * window - hop.
double frame_origin_time(const dsp::SpectrogramConfig& config);

/// Hop frame whose slot contains `time` (may be negative before the first slot).
std::int64_t frame_of_time(double time, const dsp::SpectrogramConfig& config);
double time_of_frame(std::int64_t frame, const dsp::SpectrogramConfig& config);

/// Log-mel features of 16 kHz mono audio. Each window is a single zero-padded
/// STFT frame (n_fft >= window samples), so pooling over the window's STFT
/// frames is the frame itself. Throws TooShortInput below one window.
FeatureSequence extract_features(std::span<const double> audio, const dsp::SpectrogramConfig& config);

/// Per-frame 0/1 labels for `n_frames` frames from event spans (seconds).
std::vector<std::uint8_t> frame_labels(std::span<const sim::Interval> spans, std::size_t n_frames,
                                       const dsp::SpectrogramConfig& config);

}  // namespace sonoloc::detect
