#include "sonoloc/detect/features.hpp"

#include <cmath>

namespace sonoloc::detect {

double frame_origin_time(const dsp::SpectrogramConfig& config) {
    return (1.0 - kLabelGuard) * config.window_len - config.hop_len;
}

std::int64_t frame_of_time(double time, const dsp::SpectrogramConfig& config) {
    return static_cast<std::int64_t>(std::floor((time - frame_origin_time(config)) / config.hop_len + 1e-9));
}

double time_of_frame(std::int64_t frame, const dsp::SpectrogramConfig& config) {
    return frame_origin_time(config) + static_cast<double>(frame) * config.hop_len;
}

FeatureSequence extract_features(std::span<const double> audio, const dsp::SpectrogramConfig& config) {
    dsp::MelSpectrogram mel = dsp::log_mel(audio, config);
    FeatureSequence features;
    features.n_frames = mel.n_frames;
    features.dim = mel.n_mels;
    features.values = std::move(mel.values);
    features.hop_len = config.hop_len;
    features.origin_time = frame_origin_time(config);
    return features;
}

std::vector<std::uint8_t> frame_labels(std::span<const sim::Interval> spans, std::size_t n_frames,
                                       const dsp::SpectrogramConfig& config) {
    std::vector<std::uint8_t> labels(n_frames, 0);
    const double guard = kLabelGuard * config.window_len;
    for (std::size_t k = 0; k < n_frames; ++k) {
        const double start = static_cast<double>(k) * config.hop_len;
        const double lo = start + guard;
        const double hi = start + config.window_len - guard;
        for (const sim::Interval& s : spans) {
            if (s.start < hi - 1e-12 && s.end > lo) {
                labels[k] = 1;
                break;
            }
        }
    }
    return labels;
}

}  // namespace sonoloc::detect
