#include "sonoloc/recording.hpp"

#include "sonoloc/errors.hpp"

#include <cmath>

namespace sonoloc {

void MultichannelRecording::validate() const {
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) throw InvalidArgument("recording: sample rate must be positive");
    const std::size_t n = length();
    for (const auto& ch : channels) {
        if (ch.size() != n) throw InvalidArgument("recording: channels differ in length");
        for (float s : ch) {
            if (!std::isfinite(s)) throw InvalidArgument("recording: non-finite sample");
        }
    }
}

std::vector<double> MultichannelRecording::mixdown() const {
    std::vector<double> mono(length(), 0.0);
    if (channels.empty()) return mono;
    for (const auto& ch : channels) {
        for (std::size_t i = 0; i < ch.size(); ++i) mono[i] += static_cast<double>(ch[i]);
    }
    const double scale = 1.0 / static_cast<double>(channels.size());
    for (double& v : mono) v *= scale;
    return mono;
}

}  // namespace sonoloc
