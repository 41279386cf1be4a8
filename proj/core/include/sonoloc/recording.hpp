#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sonoloc {

/// Synchronized M-channel audio at one sample rate. Samples are stored as
/// 32-bit floats, the on-disk WAV representation.
struct MultichannelRecording {
    std::vector<std::vector<float>> channels;
    double sample_rate = 0.0;

    std::size_t channel_count() const { return channels.size(); }
    std::size_t length() const { return channels.empty() ? 0 : channels.front().size(); }
    double duration() const { return sample_rate > 0.0 ? static_cast<double>(length()) / sample_rate : 0.0; }

    /// Throws InvalidArgument on ragged channels, non-finite samples or a
    /// non-positive rate.
    void validate() const;

    /// Channel average in double precision.
    std::vector<double> mixdown() const;
};

}  // namespace sonoloc
