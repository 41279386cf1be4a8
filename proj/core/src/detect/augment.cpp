#include "sonoloc/detect/augment.hpp"

#include "sonoloc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace sonoloc::detect {

namespace {

void check_range(const Range& r, const char* name) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi) {
        throw InvalidArgument(std::string("augmentation range ") + name + " is not well-ordered");
    }
}

double uniform(const Range& r, std::mt19937_64& rng) {
    if (r.lo == r.hi) return r.lo;
    return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

}  // namespace

void AugmentationSpec::validate() const {
    check_range(gain_db, "gain_db");
    check_range(noise_snr_db, "noise_snr_db");
    check_range(clip_fraction, "clip_fraction");
    if (clip_fraction.lo <= 0.0 || clip_fraction.hi > 1.0) {
        throw InvalidArgument("clip fraction must lie in (0, 1]");
    }
}

AugmentationDraw draw_augmentation(const AugmentationSpec& spec, std::mt19937_64& rng) {
    AugmentationDraw d;
    d.gain_db = uniform(spec.gain_db, rng);
    d.snr_db = uniform(spec.noise_snr_db, rng);
    d.clip_fraction = uniform(spec.clip_fraction, rng);
    return d;
}

std::vector<double> apply_augmentation(std::span<const double> audio, const AugmentationDraw& draw,
                                       std::mt19937_64& rng) {
    const double gain = std::pow(10.0, draw.gain_db / 20.0);
    std::vector<double> out(audio.size());
    double energy = 0.0;
    for (std::size_t i = 0; i < audio.size(); ++i) {
        out[i] = gain * audio[i];
        energy += out[i] * out[i];
    }
    const double rms = audio.empty() ? 0.0 : std::sqrt(energy / static_cast<double>(audio.size()));
    if (rms > 0.0) {
        std::normal_distribution<double> noise(0.0, rms * std::pow(10.0, -draw.snr_db / 20.0));
        for (double& v : out) v += noise(rng);
    }
    double peak = 0.0;
    for (double v : out) peak = std::max(peak, std::abs(v));
    const double limit = draw.clip_fraction * peak;
    if (draw.clip_fraction < 1.0) {
        for (double& v : out) v = std::clamp(v, -limit, limit);
    }
    return out;
}

}  // namespace sonoloc::detect
